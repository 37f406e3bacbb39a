#pragma once

#include <stdexcept>
#include <string>

namespace wavegauge {

/// Base class of all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Endpoint check of an arrow composition failed beyond tolerance.
struct CompositionMismatch : Error {
    using Error::Error;
};

/// Two projectors at Fubini-Study distance >= pi/2 - margin.
struct NotLinkable : Error {
    using Error::Error;
};

/// Projector outside the requested coordinate chart.
struct OutOfChart : Error {
    using Error::Error;
};

struct RankDeficient : Error {
    using Error::Error;
};

struct IllConditioned : Error {
    using Error::Error;
};

struct NotElementary : Error {
    using Error::Error;
};

/// A required t-preimage does not exist in H.
struct NotInImage : Error {
    using Error::Error;
};

/// Matrix logarithm hit the principal-branch cut.
struct BranchFailure : Error {
    using Error::Error;
};

/// Tracked eigenvalue band touched the rest of the spectrum.
struct GapClosure : Error {
    using Error::Error;
};

struct NoCompatibleSubspace : Error {
    using Error::Error;
};

struct NotAbelian : Error {
    using Error::Error;
};

struct LinkabilityHypothesisFailed : Error {
    using Error::Error;
};

struct NoChartCover : Error {
    using Error::Error;
};

struct EffectiveDegeneracy : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace wavegauge
