#pragma once

#include <stdexcept>
#include <string>

namespace edgsolve {

// Default resource caps. All of them are overridable per call.
inline constexpr long kDefaultUnfoldCap = 100000;     // rules generated while unfolding
inline constexpr long kDefaultCycleCap = 10000;       // elementary cycles enumerated
inline constexpr long kDefaultAtomCap = 24;           // atoms accepted by brute-force enumeration
inline constexpr long kDefaultModelCap = 100000;      // models returned by the coloring solver
inline constexpr long kDefaultHypothesisBudget = 1L << 20;  // completed-cycle hypothesis tuples

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed program text. Carries a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string& what)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class BudgetError : public Error {
public:
    using Error::Error;
};

class UnfoldBudgetExceeded : public BudgetError {
public:
    explicit UnfoldBudgetExceeded(long cap)
        : BudgetError("positive unfolding exceeded the rule budget of " + std::to_string(cap)) {}
};

class CycleBudgetExceeded : public BudgetError {
public:
    explicit CycleBudgetExceeded(long cap)
        : BudgetError("cycle enumeration exceeded the budget of " + std::to_string(cap)) {}
};

class DecompositionBudgetExceeded : public BudgetError {
public:
    explicit DecompositionBudgetExceeded(long budget)
        : BudgetError("hypothesis space exceeds the decomposition budget of " + std::to_string(budget)) {}
};

class TooManyAtoms : public BudgetError {
public:
    TooManyAtoms(long atoms, long cap)
        : BudgetError("program has " + std::to_string(atoms) + " atoms, brute-force cap is " +
                      std::to_string(cap)) {}
};

class HypothesisOutOfRange : public Error {
public:
    explicit HypothesisOutOfRange(const std::string& atom)
        : Error("hypothesis atom '" + atom + "' is not a handle atom of the cycle") {}
};

class InconsistentLog : public Error {
public:
    explicit InconsistentLog(const std::string& what) : Error("inconsistent transform log: " + what) {}
};

// The coloring solver only accepts graphs of kernel programs: negative
// edges everywhere and no vertex without an incoming edge.
class NonKernelGraph : public Error {
public:
    explicit NonKernelGraph(const std::string& what) : Error("not a kernel-program graph: " + what) {}
};

}  // namespace edgsolve
