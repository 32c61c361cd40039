#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "envwit/sdp/problem.hpp"

namespace envwit {

// Sparse SDPA (.dat-s). SDPA reads
//   primal: min c.x  s.t. sum_k F_k x_k - F_0 >= 0
//   dual:   max <F_0, Y>  s.t. <F_k, Y> = c_k, Y >= 0
// and our problem is the dual with F_0 = F, F_k = C_k, c = b.
namespace sdpa_detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::map<std::pair<int, int>, double> upper(const SparseSym<double>& m) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& e : m)
    if (e.row <= e.col) acc[{e.row, e.col}] += e.value;
  return acc;
}

}  // namespace sdpa_detail

inline void write_sdpa(const RealSdp& p, std::ostream& os) {
  os << "\"envwit relaxation: maximize <F,X> s.t. <C_k,X> = b_k, X psd\n";
  os << "* written as the SDPA dual: F0 = +F (not negated), Fk = C_k, c = b\n";
  os << "* realify mode: " << to_string(p.realify_mode) << "\n";
  os << p.constraints.size() << " = mDIM\n";
  os << p.blocks.size() << " = nBLOCK\n";
  for (std::size_t r = 0; r < p.blocks.size(); ++r) os << (r ? " " : "") << p.blocks[r].size;
  os << " = bLOCKsTRUCT\n";
  for (std::size_t k = 0; k < p.constraints.size(); ++k) os << (k ? " " : "") << sdpa_detail::fmt(p.constraints[k].rhs);
  os << "\n";
  const std::vector<int> id = p.block_index();
  auto emit = [&](std::size_t matno, const SparseSym<double>& m) {
    for (const auto& [rc, v] : sdpa_detail::upper(m)) {
      if (v == 0.0) continue;
      const int b = id[static_cast<std::size_t>(rc.first)];
      const int off = p.blocks[static_cast<std::size_t>(b)].offset;
      os << matno << ' ' << b + 1 << ' ' << rc.first - off + 1 << ' ' << rc.second - off + 1 << ' '
         << sdpa_detail::fmt(v) << '\n';
    }
  };
  emit(0, p.objective);
  for (std::size_t k = 0; k < p.constraints.size(); ++k) emit(k + 1, p.constraints[k].matrix);
  if (!os) throw IoError("failed writing SDPA stream");
}

inline void export_sdpa(const RealSdp& p, const std::string& path) {
  const auto diag = validate(p);
  if (!diag.empty()) throw InvalidArgument("refusing to export an invalid problem: " + diag.front());
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  write_sdpa(p, f);
}

inline void export_sdpa(const ComplexSdp&, const std::string&) {
  throw ComplexNotRealified("export_sdpa needs a real problem; realify it first");
}

inline RealSdp read_sdpa(std::istream& is) {
  std::string line;
  std::ostringstream body;
  bool header = true;
  while (std::getline(is, line)) {
    if (header && (line.empty() || line[0] == '"' || line[0] == '*')) continue;
    header = false;
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
    for (char& c : line)
      if (c == ',' || c == '{' || c == '}' || c == '(' || c == ')' || c == '=') c = ' ';
    // drop trailing annotations such as "mDIM"
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      std::strtod(tok.c_str(), &end);
      if (end && *end == '\0') body << tok << ' ';
    }
    body << '\n';
  }
  std::istringstream in(body.str());
  long m = 0, nb = 0;
  if (!(in >> m >> nb) || m < 0 || nb < 1) throw IoError("malformed SDPA header");
  RealSdp p;
  int off = 0;
  for (long r = 0; r < nb; ++r) {
    long s;
    if (!(in >> s)) throw IoError("malformed SDPA block structure");
    if (s < 0) s = -s;
    p.blocks.push_back({off, static_cast<int>(s)});
    off += static_cast<int>(s);
  }
  p.constraints.resize(static_cast<std::size_t>(m));
  for (long k = 0; k < m; ++k)
    if (!(in >> p.constraints[static_cast<std::size_t>(k)].rhs)) throw IoError("malformed SDPA b vector");
  long matno, blk, i, j;
  double v;
  while (in >> matno >> blk >> i >> j >> v) {
    if (matno < 0 || matno > m || blk < 1 || blk > nb) throw IoError("SDPA entry out of range");
    const Block& b = p.blocks[static_cast<std::size_t>(blk - 1)];
    if (i < 1 || j < 1 || i > b.size || j > b.size) throw IoError("SDPA entry index outside its block");
    const int r = b.offset + static_cast<int>(std::min(i, j)) - 1, c = b.offset + static_cast<int>(std::max(i, j)) - 1;
    SparseSym<double>& target = matno == 0 ? p.objective : p.constraints[static_cast<std::size_t>(matno - 1)].matrix;
    target.push_back({r, c, v});
    if (r != c) target.push_back({c, r, v});
  }
  if (!in.eof()) throw IoError("trailing garbage in SDPA entries");
  return p;
}

inline RealSdp import_sdpa(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  return read_sdpa(f);
}

}  // namespace envwit
