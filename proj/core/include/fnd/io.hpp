#pragma once

#include <iosfwd>
#include <string>

#include "fnd/complex.hpp"

namespace fnd {

// Parse the .fnc text format.  When check_invariants is set (the default),
// axiom violations are reported as line-numbered parse errors; pass false to
// load a broken spec for diagnostic tooling.
ComplexSpec parse_fnc(std::istream& in, bool check_invariants = true);
ComplexSpec parse_fnc_file(const std::string& path, bool check_invariants = true);

void write_fnc(std::ostream& out, const ComplexSpec& spec);
void write_fnc_file(const std::string& path, const ComplexSpec& spec);

// Chain files share the term grammar:
//   chain <degree> : <coeff>@<exponents> * <gen-id> [; ...]
Chain parse_chain(std::istream& in, const ComplexSpec& spec);
Chain parse_chain_file(const std::string& path, const ComplexSpec& spec);

void write_chain(std::ostream& out, const ComplexSpec& spec, const Chain& c);

// Coordinates of v against the configured value basis (used by the writer;
// throws ConfigError when v is outside the basis span).
std::vector<mpq_class> coords_of(const ValuationConfig& cfg, const ExactValue& v);

} // namespace fnd
