#include "haplomin/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "haplomin/fragment_matrix.hpp"

namespace haplomin {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return in;
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#' || line[0] == '\r';
}

}  // namespace

void write_truth_file(const std::string& path, const GroundTruth& truth,
                      const std::map<std::string, std::string>& info) {
  auto out = open_for_write(path);
  out << "haplotype " << truth.haplotype.allele_string() << "\n";
  out << "membership";
  for (auto s : truth.membership) out << ' ' << static_cast<int>(s);
  out << "\n";
  for (const auto& [key, value] : info) {
    if (key == "haplotype" || key == "membership" || key.empty()) {
      throw std::invalid_argument("reserved or empty info key: " + key);
    }
    out << key << ' ' << value << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

TruthRecord read_truth_file(const std::string& path) {
  auto in = open_for_read(path);
  TruthRecord rec;
  bool have_h = false, have_b = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "haplotype") {
      std::string alleles;
      ss >> alleles;
      try {
        rec.truth.haplotype = Haplotype::from_allele_string(alleles);
      } catch (const std::invalid_argument& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
      have_h = true;
    } else if (key == "membership") {
      int v = 0;
      while (ss >> v) {
        if (v != 1 && v != -1) {
          throw ParseError("line " + std::to_string(line_no) +
                           ": membership entries must be +1 or -1");
        }
        rec.truth.membership.push_back(static_cast<std::int8_t>(v));
      }
      if (!ss.eof()) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected integer membership entries");
      }
      have_b = true;
    } else {
      std::string value;
      std::getline(ss, value);
      const auto start = value.find_first_not_of(" \t");
      rec.info[key] = start == std::string::npos ? "" : value.substr(start);
    }
  }
  if (!have_h) throw ParseError(path + ": missing haplotype line");
  if (!have_b) throw ParseError(path + ": missing membership line");
  return rec;
}

void write_haplotype_file(const std::string& path, const Haplotype& h) {
  auto out = open_for_write(path);
  out << h.allele_string() << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Haplotype read_haplotype_file(const std::string& path) {
  auto in = open_for_read(path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    try {
      return Haplotype::from_allele_string(line);
    } catch (const std::invalid_argument& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  throw ParseError(path + ": no allele line found");
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_for_write(path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace haplomin
