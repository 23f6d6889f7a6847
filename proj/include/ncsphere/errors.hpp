#pragma once

#include <stdexcept>
#include <string>

namespace ncsphere {

// Exact symbolic division failed: divisor is not an exact factor in the ring.
struct NotDivisible : std::runtime_error {
    explicit NotDivisible(const std::string& m) : std::runtime_error(m) {}
};

// ad_eps0 is defined only for the raising*lowering bilinears J0, J+-, K0.
struct UnsupportedGenerator : std::runtime_error {
    explicit UnsupportedGenerator(const std::string& m) : std::runtime_error(m) {}
};

// Basis label out of range: needs |r|,|m| <= n and n+r, n+m integers.
struct InvalidLabel : std::runtime_error {
    explicit InvalidLabel(const std::string& m) : std::runtime_error(m) {}
};

// Operation expected a single Ad K0 eigensector (or matching sector data).
struct SectorMismatch : std::runtime_error {
    explicit SectorMismatch(const std::string& m) : std::runtime_error(m) {}
};

// Hypergeometric sum does not terminate for the given parameters.
struct NonTerminating : std::runtime_error {
    explicit NonTerminating(const std::string& m) : std::runtime_error(m) {}
};

// Clebsch-Gordan labels violate triangle or magnetic-number constraints.
struct InvalidCoupling : std::runtime_error {
    explicit InvalidCoupling(const std::string& m) : std::runtime_error(m) {}
};

// Table request exceeds the configured n_max hard cap.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& m) : std::runtime_error(m) {}
};

// Wigner-Eckart reduction produced m-dependent candidates.
struct InconsistentReduction : std::runtime_error {
    explicit InconsistentReduction(const std::string& m) : std::runtime_error(m) {}
};

// 2 pi rotation sign is undefined on mixed integer/half-integer support.
struct MixedParity : std::runtime_error {
    explicit MixedParity(const std::string& m) : std::runtime_error(m) {}
};

// Operation needs a numeric parameter point but got a symbolic one.
struct SymbolicPointUnsupported : std::runtime_error {
    explicit SymbolicPointUnsupported(const std::string& m) : std::runtime_error(m) {}
};

// Bracket input is not divisible by eps (coefficient of eps-order < 2 found).
struct NotEpsDivisible : std::runtime_error {
    explicit NotEpsDivisible(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace ncsphere
