#include "skdv/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skdv {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path);
}

}  // namespace

std::string trajectory_csv(const TrajectoryRecord& rec) {
  std::string out = "t,l2,h1,h2,i0,i1,i2\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    out += fmt(rec.times[i]);
    out += ',';
    out += fmt(rec.l2[i]);
    out += ',';
    out += fmt(rec.h1[i]);
    out += ',';
    out += fmt(rec.h2[i]);
    out += ',';
    out += fmt(rec.i0[i]);
    out += ',';
    out += fmt(rec.i1[i]);
    out += ',';
    out += fmt(rec.i2[i]);
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path) {
  write_text_file(path, trajectory_csv(rec));
}

void write_snapshot(const SpectralField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open snapshot for writing", path);
  const int32_t n = f.grid.n_modes;
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (int i = 0; i <= f.grid.n_modes; ++i) {
    const double re = f.c[i].real(), im = f.c[i].imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof re);
    out.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
  if (!out) fail("snapshot write failed", path);
}

SpectralField read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open snapshot", path);
  int32_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n < 1 || n > (1 << 24)) fail("snapshot header malformed", path);
  SpectralField f(TorusGrid::with_default_points(n));
  for (int i = 0; i <= n; ++i) {
    double re = 0, im = 0;
    in.read(reinterpret_cast<char*>(&re), sizeof re);
    in.read(reinterpret_cast<char*>(&im), sizeof im);
    if (!in) fail("snapshot truncated", path);
    f.c[i] = cxd{re, im};
  }
  return f;
}

void write_jump_log(const std::vector<JumpEvent>& ev, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open jump log for writing", path);
  for (const JumpEvent& e : ev) {
    out.write(reinterpret_cast<const char*>(&e.time), sizeof e.time);
    out.write(reinterpret_cast<const char*>(&e.mark), sizeof e.mark);
    const char big = e.is_large ? 1 : 0;
    out.write(&big, 1);
  }
  if (!out) fail("jump log write failed", path);
}

std::vector<JumpEvent> read_jump_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open jump log", path);
  std::vector<JumpEvent> ev;
  for (;;) {
    JumpEvent e;
    char big = 0;
    in.read(reinterpret_cast<char*>(&e.time), sizeof e.time);
    if (in.eof() && in.gcount() == 0) break;
    in.read(reinterpret_cast<char*>(&e.mark), sizeof e.mark);
    in.read(&big, 1);
    if (!in) fail("jump log truncated", path);
    e.is_large = big != 0;
    ev.push_back(e);
  }
  return ev;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open file for writing", path);
  out << content;
  if (!out) fail("write failed", path);
}

}  // namespace skdv
