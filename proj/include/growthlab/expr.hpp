#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/error.hpp"
#include "growthlab/magnitude.hpp"
#include "growthlab/rational.hpp"

namespace growthlab {

class Tower;

// Single-variable expression language: rational constants, the constant e,
// the variable x, field operations, iterated exp/log, the tower functions
// Xi/XiInv/Chi, fractional iterates of exp, references to the named example
// functions, and a marker node for numeric differentiation.
enum class NodeKind {
    Const,
    ConstE,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    ExpK,
    LogK,
    Xi,
    XiInv,
    Chi,
    FracIter,
    Named,
    Gadget,
    NumericDeriv,
};

enum class NamedKind { Fk, G, H, Ell };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    Rational value{0, 1};     // Const payload
    int index = 0;            // k of ExpK/LogK, n of Xi/XiInv/Chi, k of fk, m of gadget
    Rational t{0, 1};         // FracIter exponent
    NamedKind named = NamedKind::Fk;
    std::vector<Expr> kids;   // Gadget children are {F, delta, argument}
};

// Node constructors (with light constant folding so printed forms re-parse
// to identical trees).
Expr constant(const Rational& r);
Expr constant(long long n);
Expr const_e();
Expr var();
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr expk(int k, const Expr& u);
Expr logk(int k, const Expr& u);
Expr xi_node(int n, const Expr& u);
Expr xi_inv_node(int n, const Expr& u);
Expr chi_node(int n, const Expr& u);
Expr frac_iter_node(const Rational& t, const Expr& u);
Expr named_node(NamedKind which, int k, const Expr& u);
Expr gadget_node(int m, const Expr& F, const Expr& delta, const Expr& u);
Expr numeric_deriv_node(const Expr& u);

struct ParseDiagnostic {
    size_t offset = 0;
    std::string expected;
    std::string message;
};

// Parse throws Error(Parse) carrying the byte offset of the leftmost
// failure; try_parse reports the same information without throwing.
Expr parse(const std::string& text);
std::optional<Expr> try_parse(const std::string& text, ParseDiagnostic& diag);

// Minimal-parenthesis rendering; parse(print(e)) reproduces e node for node.
std::string print(const Expr& e);

bool equal(const Expr& a, const Expr& b);

// True iff every node has a symbolic derivative rule (Chi, FracIter, Named,
// Gadget and NumericDeriv do not).
bool differentiable(const Expr& e);

// Symbolic derivative; nodes without a rule differentiate to a
// NumericDeriv marker evaluated by central finite differences with step
// h = max(1e-6, 1e-8|x|).
Expr differentiate(const Expr& e);

// Evaluation. The tower argument supplies Xi/XiInv/Chi/FracIter and the
// named functions; pass nullptr for the standard tower.
Magnitude eval_mag(const Expr& e, const Magnitude& x, const Tower* tower = nullptr);
double eval_real(const Expr& e, double x, const Tower* tower = nullptr);
TowerReal eval_tower(const Expr& e, const TowerReal& x, const Tower* tower = nullptr);

} // namespace growthlab
