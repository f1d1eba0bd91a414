#pragma once

#include <stdexcept>
#include <string>

namespace kgeo {

/// Malformed input: unreadable files, wrong headers, bad numeric fields.
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Violation of the positivity / admissibility requirements on potentials,
/// paths or measures.
struct admissibility_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failure inside the nonlinear solver (stage failure, invalid solver
/// configuration, step underflow).
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kgeo
