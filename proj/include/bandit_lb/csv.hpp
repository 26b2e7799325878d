#pragma once
/// \file csv.hpp
/// Locale-independent CSV rendering and atomic file output.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "errors.hpp"
#include "lower_bounds.hpp"
#include "simulator.hpp"
#include "verification.hpp"

namespace bandit_lb {

/// Shortest round-trip decimal form with '.' as separator; "inf", "-inf", "nan" otherwise.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string format_uint(std::uint64_t x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline std::string bound_curve_csv(const BoundCurve& c) {
  std::string s = "bound_id,T,value,void,attained_by\n";
  for (const auto& p : c.points) {
    s += c.bound_id + ',' + format_uint(p.T) + ',' + format_double(p.value) + ',' + (p.is_void ? "1" : "0") + ',' +
         p.attained_by + '\n';
  }
  return s;
}

inline std::string aggregate_csv(const AggregateCurve& a) {
  std::string s = "T,mean_regret,stderr,runs\n";
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    s += format_uint(a.checkpoints[i]) + ',' + format_double(a.mean_regret[i]) + ',' +
         format_double(a.stderr_regret[i]) + ',' + format_uint(a.runs) + '\n';
  }
  return s;
}

/// Final per-arm pull counts; arms are numbered from 1.
inline std::string arm_counts_csv(const AggregateCurve& a) {
  std::string s = "arm,mean_count,stderr\n";
  const auto& m = a.final_mean_counts();
  const auto& e = a.final_stderr_counts();
  for (std::size_t k = 0; k < m.size(); ++k)
    s += format_uint(k + 1) + ',' + format_double(m[k]) + ',' + format_double(e[k]) + '\n';
  return s;
}

inline std::string verification_csv(const std::vector<VerificationRow>& rows) {
  std::string s = "instance_id,check,value,threshold,pass\n";
  for (const auto& r : rows)
    s += r.instance_id + ',' + r.check + ',' + format_double(r.value) + ',' + format_double(r.threshold) + ',' +
         (r.pass ? "1" : "0") + '\n';
  return s;
}

}  // namespace bandit_lb
