#include "inls/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace inls {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string profile_csv(const RadialProfile& profile) {
  std::string out = "r,Q\n";
  for (std::size_t j = 0; j < profile.r.size(); ++j) {
    out += format_number(profile.r[j]);
    out += ',';
    out += format_number(profile.q[j]);
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(std::span<const InvariantRecord> records) {
  std::string out = "t,mass,energy,grad_sq,variance,variance_rate,virial_rhs\n";
  for (const auto& r : records) {
    for (double v : {r.t, r.mass, r.energy, r.grad_sq, r.variance, r.variance_rate}) {
      out += format_number(v);
      out += ',';
    }
    out += format_number(r.virial_rhs);
    out += '\n';
  }
  return out;
}

RadialProfile read_profile_csv(const std::string& path, const ModelParams& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read profile '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,Q") throw Error("ParseError", path + ": expected header 'r,Q'");
  RadialProfile p{params, {}, {}, {}, 0.0, 0.0};
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const auto bad = [&] {
      return Error("ParseError", path + ": malformed row at line " + std::to_string(line_no));
    };
    if (comma == std::string::npos) throw bad();
    double r = 0.0;
    double q = 0.0;
    const char* end = line.data() + line.size();
    const auto a = std::from_chars(line.data(), line.data() + comma, r);
    const auto c = std::from_chars(line.data() + comma + 1, end, q);
    if (a.ec != std::errc() || a.ptr != line.data() + comma || c.ec != std::errc() || c.ptr != end) {
      throw bad();
    }
    if (!p.r.empty() && !(r > p.r.back())) {
      throw Error("ParseError", path + ": radii must increase (line " + std::to_string(line_no) + ")");
    }
    p.r.push_back(r);
    p.q.push_back(q);
  }
  if (p.r.size() < 2 || !(p.r.front() > 0.0)) {
    throw Error("ParseError", path + ": need at least two rows with r > 0");
  }
  p.alpha = p.q.front();
  return p;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("IoError", "write failed for '" + path + "'");
}

}  // namespace inls
