#include "sketchlr/harness.hpp"

#include <cstdio>
#include <fstream>

namespace sketchlr {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_string(const std::vector<ResultRecord>& records) {
  std::string out = "algorithm,matrix,n,r,T,k,l_or_s,trial,seed,relative_error,wall_time_ms\n";
  for (const ResultRecord& rec : records) {
    out += rec.algorithm;
    out += ',';
    out += rec.matrix;
    out += ',';
    out += std::to_string(rec.n);
    out += ',';
    out += std::to_string(rec.r);
    out += ',';
    out += std::to_string(rec.t);
    out += ',';
    out += std::to_string(rec.k);
    out += ',';
    out += std::to_string(rec.l_or_s);
    out += ',';
    out += std::to_string(rec.trial);
    out += ',';
    out += std::to_string(rec.seed);
    out += ',';
    out += fmt_double(rec.relative_error);
    out += ',';
    out += fmt_double(rec.wall_time_ms);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ResultRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("emit_csv: cannot open " + path);
  }
  const std::string body = csv_string(records);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) {
    throw std::runtime_error("emit_csv: write failed for " + path);
  }
}

}  // namespace sketchlr
