#pragma once

#include <stdexcept>
#include <string>

namespace yule {

enum class ProcessKind { Bm, Ou, Bb, CorrelatedBm };

// Selects one of the four process families and its parameters. The horizon is
// free for Bm/OU/cBm; the bridge is defined on [0,1] only.
struct ProcessSpec {
    ProcessKind kind = ProcessKind::Bm;
    double r = 0.0;        // OU mean reversion, > 0
    double c = 0.0;        // cBm correlation, |c| < 1
    double horizon = 1.0;  // T

    static ProcessSpec bm(double T = 1.0) {
        ProcessSpec s;
        s.kind = ProcessKind::Bm;
        s.horizon = T;
        s.validate();
        return s;
    }
    static ProcessSpec ou(double r, double T = 1.0) {
        ProcessSpec s;
        s.kind = ProcessKind::Ou;
        s.r = r;
        s.horizon = T;
        s.validate();
        return s;
    }
    static ProcessSpec bb() {
        ProcessSpec s;
        s.kind = ProcessKind::Bb;
        s.horizon = 1.0;
        s.validate();
        return s;
    }
    static ProcessSpec correlated_bm(double c, double T = 1.0) {
        ProcessSpec s;
        s.kind = ProcessKind::CorrelatedBm;
        s.c = c;
        s.horizon = T;
        s.validate();
        return s;
    }

    void validate() const {
        if (!(horizon > 0.0)) throw std::invalid_argument("ProcessSpec: horizon must be > 0");
        switch (kind) {
            case ProcessKind::Ou:
                if (!(r > 0.0)) throw std::invalid_argument("ProcessSpec: OU requires r > 0");
                break;
            case ProcessKind::Bb:
                if (horizon != 1.0)
                    throw std::invalid_argument("ProcessSpec: the bridge requires T = 1");
                break;
            case ProcessKind::CorrelatedBm:
                if (!(c > -1.0 && c < 1.0))
                    throw std::invalid_argument("ProcessSpec: correlation must be in (-1, 1)");
                break;
            case ProcessKind::Bm:
                break;
        }
    }

    // Independent rotation-invariant components; the correlated pair is not
    // exchangeable in distribution but its MGF still is.
    bool symmetric() const { return kind != ProcessKind::CorrelatedBm; }

    std::string name() const {
        switch (kind) {
            case ProcessKind::Bm: return "bm";
            case ProcessKind::Ou: return "ou";
            case ProcessKind::Bb: return "bb";
            case ProcessKind::CorrelatedBm: return "cbm";
        }
        return "?";
    }
};

}  // namespace yule
