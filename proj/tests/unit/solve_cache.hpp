#ifndef SELFIELD_TESTS_SOLVE_CACHE_HPP
#define SELFIELD_TESTS_SOLVE_CACHE_HPP

// Shared converged solutions so the expensive eigen-solves run once per test
// binary.

#include "selfield/magnetic.hpp"
#include "selfield/shooting.hpp"
#include "selfield/spectrum.hpp"

namespace selfield_tests {

inline const selfield::SolutionRecord& ground_A() {
    static selfield::SolutionRecord rec = [] {
        selfield::SpectrumOptions opt;
        return selfield::solve_state(selfield::AnsatzKind{}, 0, opt);
    }();
    return rec;
}

inline const selfield::SolutionRecord& ground_B() {
    static selfield::SolutionRecord rec = [] {
        selfield::SpectrumOptions opt;
        selfield::AnsatzKind kind;
        kind.variant = selfield::Ansatz::B;
        return selfield::solve_state(kind, 0, opt);
    }();
    return rec;
}

inline const selfield::SolutionRecord& linear_A0() {
    static selfield::SolutionRecord rec = [] {
        selfield::SpectrumOptions opt;
        opt.linear = true;
        return selfield::solve_state(selfield::AnsatzKind{}, 0, opt);
    }();
    return rec;
}

} // namespace selfield_tests

#endif
