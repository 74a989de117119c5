#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "holodet/detection.hpp"

namespace holodet {

// Annotation lines: `x1 y1 x2 y2 x3 y3 x4 y4 <class> [<difficulty>]`, corners in
// clockwise (screen) order. Blank lines, `#` comments and the DOTA
// `imagesource:` / `gsd:` header lines are skipped.
std::vector<Annotation> read_annotations(std::istream& in, const std::string& source = {});
std::vector<Annotation> read_annotations_file(const std::string& path);
void write_annotations(std::ostream& out, const std::vector<Annotation>& anns);

// Detection lines: `class score cx cy w h theta layer window`, theta in radians.
// An annotation-format file is also accepted; its instances get score 1.
std::vector<Detection> read_detections(std::istream& in, const std::string& source = {});
std::vector<Detection> read_detections_file(const std::string& path);
void write_detections(std::ostream& out, const std::vector<Detection>& dets);

/// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace holodet
