#pragma once

#include <string>
#include <vector>

#include "cdcr/actuation.hpp"
#include "cdcr/kinematics.hpp"
#include "cdcr/record.hpp"

namespace cdcr {

inline constexpr const char* kRecordHeader = "t,tip_x,tip_y,theta_L,delta_l,gamma,T_rot,T_x,T_y,U_b,compute_flag";
inline constexpr const char* kShapeHeader = "t,s,x,y,theta";

/// Locale-independent decimal with 9 significant digits.
std::string format_number(double value);

/// "<dir>/<stem>.csv" -> "<dir>/<stem>_shapes.csv".
std::string shapes_path(const std::string& record_path);

/// Writes the record table and, when the record holds shapes, the sibling
/// shape file. compute_flag is 1 on the flagged sample of a run that did not
/// converge, 0 otherwise.
void write_record_csv(const SimulationRecord& record, const std::string& path);

/// Reads a record table (and its shape file when present).
SimulationRecord read_record_csv(const std::string& path);

/// Two-column (t, value) CSV, optional header line.
ActuationProfile load_profile_csv(const std::string& path, InputMode mode);

/// SVG with one polyline and one time label per shape, viewport [-L, L]^2 in
/// user units (y up).
void write_shape_svg(const std::vector<BackboneShape>& shapes, const std::vector<double>& times, double length,
                     const std::string& path);

/// Picks `count` shapes evenly spread over the record.
void write_record_svg(const SimulationRecord& record, const std::string& path, int count = 6);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cdcr
