#pragma once

#include "gazekit/types.hpp"

namespace gazekit {

/// Decimates a recording (and any paired stimulus/truth tracks) to
/// target_hz by nearest-sample selection: output k is the input sample
/// whose timestamp is closest to first_ts + k * (1000 / target_hz),
/// ties resolved toward the earlier sample. Pure index selection -
/// every output sample is bit-identical to some input sample and the
/// paired tracks are decimated with the same indices.
///
/// Throws UpsamplingUnsupported when target_hz exceeds the native rate.
AlignedData resample(const AlignedData& input, double target_hz);

}  // namespace gazekit
