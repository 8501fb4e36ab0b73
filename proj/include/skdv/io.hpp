#pragma once

#include <string>
#include <vector>

#include "skdv/integrator.hpp"

namespace skdv {

// CSV with header t,l2,h1,h2,i0,i1,i2; values printed with %.17g so equal
// runs produce byte-identical files.
std::string trajectory_csv(const TrajectoryRecord& rec);
void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path);

// Snapshot: int32 mode count N, then N+1 coefficient pairs (re, im) as
// float64, n = 0..N, native byte order.
void write_snapshot(const SpectralField& f, const std::string& path);
SpectralField read_snapshot(const std::string& path);

// Jump replay record, per event: time float64, mark float64, is_large byte.
void write_jump_log(const std::vector<JumpEvent>& ev, const std::string& path);
std::vector<JumpEvent> read_jump_log(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace skdv
