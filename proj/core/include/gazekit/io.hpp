#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "gazekit/types.hpp"

namespace gazekit {

/// Optional renaming of the canonical CSV columns, e.g.
/// {"timestamp_ms", "ts"} reads the timestamp from a column named "ts".
/// Canonical names: timestamp_ms, x_deg, y_deg, sx_deg, sy_deg,
/// intended, truth.
using ColumnMap = std::map<std::string, std::string>;

/// Reads a gaze CSV (header row, comma separated, '.' decimal point).
/// Required columns: timestamp_ms, x_deg, y_deg. When sx_deg, sy_deg
/// and intended are all present a stimulus track is returned; a truth
/// column yields a ground-truth label sequence. Rows with non-numeric
/// gaze coordinates become valid=false samples. The nominal rate is
/// inferred from the median inter-sample interval.
///
/// Throws FormatError (missing column, bad field) or OrderingError
/// (non-monotone timestamps), both naming the offending column/row.
AlignedData parse_recording(std::istream& in, const ColumnMap& columns = {});

/// Writes gaze plus whatever side-channels are present, in the same
/// column layout parse_recording() accepts. Numbers are emitted in
/// shortest round-trip form so a read-back is bit-identical.
void write_dataset_csv(std::ostream& out, const AlignedData& data);

/// Per-sample label file: timestamp_ms,label.
void write_labels_csv(std::ostream& out, const GazeRecording& recording,
                      const LabelSequence& labels);

/// Shortest round-trip decimal rendering (locale independent).
std::string format_double(double value);

}  // namespace gazekit
