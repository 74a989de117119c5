#include "holodet/formats.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "holodet/error.hpp"

namespace holodet {

namespace {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool is_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Returns false at end of input. Skips blank, comment and header lines.
  bool next(std::vector<Token>& tokens) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      tokens = tokenize(line_);
      if (tokens.empty() || tokens.front().text.front() == '#') continue;
      if (tokens.front().text.starts_with("imagesource:") || tokens.front().text.starts_with("gsd:")) {
        continue;
      }
      return true;
    }
    return false;
  }

  double number(const Token& t) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || !std::isfinite(v)) {
      fail(t.column, "expected a number, got '" + std::string(t.text) + "'");
    }
    return v;
  }

  int integer(const Token& t) const {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      fail(t.column, "expected an integer, got '" + std::string(t.text) + "'");
    }
    return v;
  }

  [[noreturn]] void fail(std::size_t column, const std::string& what) const {
    throw ParseError(source_, line_no_, column, what);
  }

  template <typename F>
  auto guarded(std::size_t column, F&& f) const {
    try {
      return f();
    } catch (const InvalidBox& e) {
      fail(column, e.what());
    }
  }

 private:
  std::istream& in_;
  std::string source_;
  std::string line_;
  std::size_t line_no_ = 0;
};

Annotation annotation_from_tokens(const LineReader& reader, const std::vector<Token>& t) {
  if (t.size() < 9 || t.size() > 10) {
    reader.fail(1, "annotation line needs 8 coordinates, a class and an optional difficulty");
  }
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) {
    q[i] = {reader.number(t[2 * i]), reader.number(t[2 * i + 1])};
  }
  Annotation ann;
  ann.box = reader.guarded(t[0].column, [&] { return fit_corners(q); });
  ann.label = std::string(t[8].text);
  ann.difficulty = t.size() == 10 ? reader.integer(t[9]) : 0;
  return ann;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{}", value);
}

std::vector<Annotation> read_annotations(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::vector<Annotation> out;
  std::vector<Token> tokens;
  while (reader.next(tokens)) out.push_back(annotation_from_tokens(reader, tokens));
  return out;
}

std::vector<Annotation> read_annotations_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_annotations(in, path);
}

void write_annotations(std::ostream& out, const std::vector<Annotation>& anns) {
  for (const Annotation& a : anns) {
    for (const Point& p : corners(a.box)) {
      out << format_number(p.x) << ' ' << format_number(p.y) << ' ';
    }
    out << a.label << ' ' << a.difficulty << '\n';
  }
}

std::vector<Detection> read_detections(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::vector<Detection> out;
  std::vector<Token> t;
  while (reader.next(t)) {
    if (is_number(t.front().text)) {
      const Annotation ann = annotation_from_tokens(reader, t);
      out.push_back({ann.box, 1.0, ann.label, 1, -1, Frame::kOriginal});
      continue;
    }
    if (t.size() != 9) {
      reader.fail(1, "detection line needs: class score cx cy w h theta layer window");
    }
    Detection d;
    d.label = std::string(t[0].text);
    d.score = reader.number(t[1]);
    if (d.score < 0.0 || d.score > 1.0) reader.fail(t[1].column, "score must lie in [0, 1]");
    const double cx = reader.number(t[2]);
    const double cy = reader.number(t[3]);
    const double w = reader.number(t[4]);
    const double h = reader.number(t[5]);
    const double theta = reader.number(t[6]);
    d.box = reader.guarded(t[4].column, [&] { return canonicalize(cx, cy, w, h, theta); });
    d.layer = reader.integer(t[7]);
    d.window = reader.integer(t[8]);
    if (d.layer < 1) reader.fail(t[7].column, "layer index is 1-based");
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Detection> read_detections_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_detections(in, path);
}

void write_detections(std::ostream& out, const std::vector<Detection>& dets) {
  for (const Detection& d : dets) {
    out << d.label << ' ' << format_number(d.score) << ' ' << format_number(d.box.cx) << ' '
        << format_number(d.box.cy) << ' ' << format_number(d.box.w) << ' ' << format_number(d.box.h)
        << ' ' << format_number(d.box.theta) << ' ' << d.layer << ' ' << d.window << '\n';
  }
}

}  // namespace holodet
