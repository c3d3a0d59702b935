#include "gazekit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_number(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

double median_interval(const std::vector<GazeSample>& samples) {
  std::vector<double> gaps;
  gaps.reserve(samples.size() - 1);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    gaps.push_back(samples[i].timestamp_ms - samples[i - 1].timestamp_ms);
  }
  auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
  std::nth_element(gaps.begin(), mid, gaps.end());
  return *mid;
}

}  // namespace

void validate_recording(const GazeRecording& rec) {
  for (std::size_t i = 1; i < rec.samples.size(); ++i) {
    if (!(rec.samples[i].timestamp_ms > rec.samples[i - 1].timestamp_ms)) {
      raise(Errc::OrderingError,
            "timestamps not strictly increasing at row " + std::to_string(i));
    }
  }
  if (rec.samples.size() >= 2 && rec.rate_hz > 0.0) {
    const double nominal = 1000.0 / rec.rate_hz;
    const double median = median_interval(rec.samples);
    if (std::abs(median - nominal) > 0.1 * nominal) {
      raise(Errc::FormatError,
            "median inter-sample interval " + std::to_string(median) +
                " ms is inconsistent with rate " + std::to_string(rec.rate_hz) +
                " Hz");
    }
  }
}

AlignedData parse_recording(std::istream& in, const ColumnMap& columns) {
  auto column_name = [&](const char* canonical) -> std::string {
    auto it = columns.find(canonical);
    return it == columns.end() ? canonical : it->second;
  };

  std::string line;
  if (!std::getline(in, line)) {
    raise(Errc::FormatError, "empty input: no header row");
  }
  const auto header = split_csv_line(line);
  auto find_col = [&](const char* canonical) -> std::ptrdiff_t {
    const std::string name = column_name(canonical);
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };

  const std::ptrdiff_t c_ts = find_col("timestamp_ms");
  const std::ptrdiff_t c_x = find_col("x_deg");
  const std::ptrdiff_t c_y = find_col("y_deg");
  for (auto [idx, canonical] :
       {std::pair{c_ts, "timestamp_ms"}, {c_x, "x_deg"}, {c_y, "y_deg"}}) {
    if (idx < 0) {
      raise(Errc::FormatError,
            std::string("missing required column: ") + canonical);
    }
  }
  const std::ptrdiff_t c_sx = find_col("sx_deg");
  const std::ptrdiff_t c_sy = find_col("sy_deg");
  const std::ptrdiff_t c_int = find_col("intended");
  const std::ptrdiff_t c_truth = find_col("truth");

  const bool any_stim = c_sx >= 0 || c_sy >= 0 || c_int >= 0;
  const bool full_stim = c_sx >= 0 && c_sy >= 0 && c_int >= 0;
  if (any_stim && !full_stim) {
    raise(Errc::FormatError,
          "stimulus columns must appear together: sx_deg, sy_deg, intended");
  }

  AlignedData out;
  if (full_stim) out.stimulus.emplace();
  if (c_truth >= 0) out.truth.emplace();

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      raise(Errc::FormatError, "row " + std::to_string(row) + " has " +
                                   std::to_string(fields.size()) +
                                   " fields, header has " +
                                   std::to_string(header.size()));
    }

    GazeSample s;
    if (!parse_number(fields[static_cast<std::size_t>(c_ts)], s.timestamp_ms) ||
        !std::isfinite(s.timestamp_ms)) {
      raise(Errc::FormatError,
            "row " + std::to_string(row) + ": bad timestamp_ms value");
    }
    const bool ok_x = parse_number(fields[static_cast<std::size_t>(c_x)], s.x);
    const bool ok_y = parse_number(fields[static_cast<std::size_t>(c_y)], s.y);
    if (!ok_x || !ok_y || !std::isfinite(s.x) || !std::isfinite(s.y)) {
      s.valid = false;
      s.x = std::numeric_limits<double>::quiet_NaN();
      s.y = std::numeric_limits<double>::quiet_NaN();
    }
    if (!out.recording.samples.empty() &&
        !(s.timestamp_ms > out.recording.samples.back().timestamp_ms)) {
      raise(Errc::OrderingError,
            "non-monotone timestamp at row " + std::to_string(row));
    }
    out.recording.samples.push_back(s);

    if (full_stim) {
      StimulusSample st;
      st.timestamp_ms = s.timestamp_ms;
      if (!parse_number(fields[static_cast<std::size_t>(c_sx)], st.x) ||
          !parse_number(fields[static_cast<std::size_t>(c_sy)], st.y)) {
        raise(Errc::FormatError,
              "row " + std::to_string(row) + ": bad stimulus coordinate");
      }
      auto lbl = label_from_code(fields[static_cast<std::size_t>(c_int)]);
      if (!lbl) {
        raise(Errc::FormatError,
              "row " + std::to_string(row) + ": bad intended label \"" +
                  fields[static_cast<std::size_t>(c_int)] + "\"");
      }
      st.intended = *lbl;
      out.stimulus->samples.push_back(st);
    }
    if (c_truth >= 0) {
      auto lbl = label_from_code(fields[static_cast<std::size_t>(c_truth)]);
      if (!lbl) {
        raise(Errc::FormatError,
              "row " + std::to_string(row) + ": bad truth label");
      }
      out.truth->push_back(*lbl);
    }
    ++row;
  }

  if (out.recording.samples.empty()) {
    raise(Errc::FormatError, "no data rows");
  }
  if (out.recording.samples.size() >= 2) {
    out.recording.rate_hz = 1000.0 / median_interval(out.recording.samples);
  }
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_dataset_csv(std::ostream& out, const AlignedData& data) {
  const bool stim = data.stimulus.has_value();
  const bool truth = data.truth.has_value();
  out << "timestamp_ms,x_deg,y_deg";
  if (stim) out << ",sx_deg,sy_deg,intended";
  if (truth) out << ",truth";
  out << "\n";
  for (std::size_t i = 0; i < data.recording.samples.size(); ++i) {
    const auto& s = data.recording.samples[i];
    out << format_double(s.timestamp_ms) << ',' << format_double(s.x) << ','
        << format_double(s.y);
    if (stim) {
      const auto& st = data.stimulus->samples[i];
      out << ',' << format_double(st.x) << ',' << format_double(st.y) << ','
          << label_code(st.intended);
    }
    if (truth) out << ',' << label_code((*data.truth)[i]);
    out << "\n";
  }
}

void write_labels_csv(std::ostream& out, const GazeRecording& recording,
                      const LabelSequence& labels) {
  if (labels.size() != recording.samples.size()) {
    raise(Errc::Internal, "label sequence length mismatch");
  }
  out << "timestamp_ms,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << format_double(recording.samples[i].timestamp_ms) << ','
        << label_code(labels[i]) << "\n";
  }
}

}  // namespace gazekit
