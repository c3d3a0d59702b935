#pragma once

#include <span>
#include <vector>

#include "gazekit/types.hpp"

namespace gazekit {

/// Point-to-point velocities in deg/s, one per sample.
///
/// v[i] is the two-point backward difference over samples i-1 and i;
/// v[0] is copied from v[1]. Pairs touching an invalid sample carry the
/// most recent velocity computed from a fully valid pair (0 until one
/// exists), which keeps the output index-aligned with the recording.
///
/// Throws InsufficientData for recordings with fewer than 2 samples.
std::vector<double> compute_velocities(const GazeRecording& recording);

/// Dispersion of a contiguous window: (max x - min x) + (max y - min y)
/// over the valid samples. Throws UndefinedDispersion when the window
/// is empty or contains no valid sample.
double compute_dispersion(std::span<const GazeSample> window);

}  // namespace gazekit
