#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pfaffkit/differential_form.hpp"
#include "pfaffkit/foliation.hpp"
#include "pfaffkit/fp.hpp"
#include "pfaffkit/linear_system.hpp"
#include "pfaffkit/polynomial.hpp"
#include "pfaffkit/rat.hpp"
#include "pfaffkit/vector_field.hpp"

namespace pfk {

// Session text rejection with a 1-based source position.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, std::size_t col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                             ": " + msg),
          line_(line),
          col_(col) {}

    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }

private:
    std::size_t line_, col_;
};

enum class DeclKind { poly, field, form, system, foliation };

// Declaration-order record; enough to print a session back out.
struct DeclRecord {
    DeclKind kind;
    std::string name;
    std::vector<std::string> generator_names;      // foliation
    std::optional<std::uint32_t> monomials_degree; // system declared as monomials(deg=k)
};

template <class K>
struct TypedSession {
    Mode mode = Mode::affine;
    std::uint64_t prime = 0;  // 0 marks the rational domain
    std::vector<std::string> vars;
    std::vector<DeclRecord> decls;
    std::map<std::string, Polynomial<K>> polys;
    std::map<std::string, VectorField<K>> fields;
    std::map<std::string, DifferentialForm<K>> forms;
    std::map<std::string, LinearSystem<K>> systems;
    std::map<std::string, Foliation<K>> foliations;

    K one() const {
        if constexpr (std::is_same_v<K, Fp>)
            return Fp(1, prime);
        else
            return K::one();
    }
};

using Session = std::variant<TypedSession<Rat>, TypedSession<Fp>>;

// Parses the session language:
//   mode affine;                    (or projective; default affine)
//   domain rational;                (or: domain mod 7; default rational)
//   vars x, y;                      (or ranges: vars x0..x3)
//   poly f = x^2*y - 3/2*x;
//   field X = [x, 2*y];
//   form w = (x*y) dx ^ dy + ...;
//   system V = monomials(deg=1);    (or an explicit list {1, x, y})
//   foliation F = {X, Y};
// `#` starts a line comment. mode, domain and vars precede every declaration;
// every referenced name is declared before use. Violations, malformed input,
// undeclared names, variable count mismatches, and projective homogeneity
// failures all raise parse_error with the offending position.
Session parse_input(const std::string& text);

namespace detail {
inline std::string joined(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ", ";
        s += parts[i];
    }
    return s;
}
}  // namespace detail

// Canonical text for a session; parse_input on it reproduces every object.
template <class K>
std::string session_text(const TypedSession<K>& s) {
    std::string out = "mode " + mode_string(s.mode) + ";\n";
    out += s.prime ? "domain mod " + std::to_string(s.prime) + ";\n" : "domain rational;\n";
    if (!s.vars.empty()) out += "vars " + detail::joined(s.vars) + ";\n";
    for (const auto& d : s.decls) {
        switch (d.kind) {
            case DeclKind::poly:
                out += "poly " + d.name + " = " + s.polys.at(d.name).str(s.vars) + ";\n";
                break;
            case DeclKind::field:
                out += "field " + d.name + " = " + s.fields.at(d.name).str(s.vars) + ";\n";
                break;
            case DeclKind::form:
                out += "form " + d.name + " = " + s.forms.at(d.name).str(s.vars) + ";\n";
                break;
            case DeclKind::system: {
                out += "system " + d.name + " = ";
                if (d.monomials_degree) {
                    out += "monomials(deg=" + std::to_string(*d.monomials_degree) + ")";
                } else {
                    std::vector<std::string> parts;
                    for (const auto& b : s.systems.at(d.name).basis())
                        parts.push_back(b.str(s.vars));
                    out += "{" + detail::joined(parts) + "}";
                }
                out += ";\n";
                break;
            }
            case DeclKind::foliation:
                out += "foliation " + d.name + " = {" + detail::joined(d.generator_names) +
                       "};\n";
                break;
        }
    }
    return out;
}

}  // namespace pfk
