// Copyright 2026 The ionsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "ionsel/core/errors.hpp"

namespace ionsel {

/// Internal (electronic) level labels. The value is the basis index inside its factor.
enum class Level : int { g = 0, e = 1, c = 2 };

inline const char* level_name(Level l) {
    switch (l) {
        case Level::g:
            return "g";
        case Level::e:
            return "e";
        case Level::c:
            return "c";
    }
    return "?";
}

inline Level parse_level(const std::string& s) {
    if (s == "g") return Level::g;
    if (s == "e") return Level::e;
    if (s == "c") return Level::c;
    throw InvalidArgument("unknown level label '" + s + "'");
}

enum class InternalKind { TwoLevel, ThreeLevel };

struct InternalSpace {
    InternalKind kind = InternalKind::TwoLevel;

    int dim() const { return kind == InternalKind::TwoLevel ? 2 : 3; }
    bool has(Level l) const { return static_cast<int>(l) < dim(); }
    int index(Level l) const {
        if (!has(l)) throw InvalidArgument(std::string("level '") + level_name(l) + "' not in internal space");
        return static_cast<int>(l);
    }
    bool operator==(const InternalSpace&) const = default;
};

inline InternalSpace two_level() { return {InternalKind::TwoLevel}; }
inline InternalSpace three_level() { return {InternalKind::ThreeLevel}; }

/// Truncated harmonic-oscillator space holding |0>..|cutoff>.
class ModeSpace {
   public:
    explicit ModeSpace(int cutoff) : cutoff_(cutoff) {
        if (cutoff < 1) throw InvalidArgument("mode cutoff must be >= 1");
    }
    int cutoff() const { return cutoff_; }
    int dim() const { return cutoff_ + 1; }
    bool operator==(const ModeSpace&) const = default;

   private:
    int cutoff_;
};

using Factor = std::variant<InternalSpace, ModeSpace>;

inline int factor_dim(const Factor& f) {
    return std::visit([](const auto& s) { return s.dim(); }, f);
}

/// Ordered tensor-product layout. Internal factors precede the (at most one) mode
/// factor, and the composite index is row-major: ((i1*d2 + i2)*...)*d_mode + n.
class SpaceDescriptor {
   public:
    SpaceDescriptor(std::vector<Factor> factors) : factors_(std::move(factors)) {
        if (factors_.empty()) throw InvalidArgument("space needs at least one factor");
        bool seen_mode = false;
        for (const auto& f : factors_) {
            if (std::holds_alternative<ModeSpace>(f)) {
                if (seen_mode) throw InvalidArgument("at most one mode factor is supported");
                seen_mode = true;
            } else if (seen_mode) {
                throw InvalidArgument("internal factors must precede the mode factor");
            }
        }
    }
    SpaceDescriptor(InternalSpace s) : SpaceDescriptor(std::vector<Factor>{s}) {}
    SpaceDescriptor(ModeSpace s) : SpaceDescriptor(std::vector<Factor>{s}) {}

    const std::vector<Factor>& factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }

    int dim() const {
        int d = 1;
        for (const auto& f : factors_) d *= factor_dim(f);
        return d;
    }

    bool has_mode() const { return std::holds_alternative<ModeSpace>(factors_.back()); }

    const ModeSpace& mode() const {
        if (!has_mode()) throw InvalidArgument("space has no mode factor");
        return std::get<ModeSpace>(factors_.back());
    }

    int mode_dim() const { return has_mode() ? mode().dim() : 1; }

    int internal_count() const { return static_cast<int>(factors_.size()) - (has_mode() ? 1 : 0); }

    const InternalSpace& internal(int i) const {
        if (i < 0 || i >= internal_count()) throw InvalidArgument("internal factor index out of range");
        return std::get<InternalSpace>(factors_[static_cast<std::size_t>(i)]);
    }

    /// Composite index of a product basis state given one index per factor.
    int index(const std::vector<int>& per_factor) const {
        if (per_factor.size() != factors_.size()) throw DimensionMismatch("basis label has wrong number of factors");
        int idx = 0;
        for (std::size_t k = 0; k < factors_.size(); ++k) {
            int d = factor_dim(factors_[k]);
            if (per_factor[k] < 0 || per_factor[k] >= d) throw InvalidArgument("basis label out of range");
            idx = idx * d + per_factor[k];
        }
        return idx;
    }

    /// Inverse of index().
    std::vector<int> decompose(int idx) const {
        std::vector<int> out(factors_.size());
        for (std::size_t k = factors_.size(); k-- > 0;) {
            int d = factor_dim(factors_[k]);
            out[k] = idx % d;
            idx /= d;
        }
        return out;
    }

    static SpaceDescriptor concat(const SpaceDescriptor& a, const SpaceDescriptor& b) {
        std::vector<Factor> f = a.factors_;
        f.insert(f.end(), b.factors_.begin(), b.factors_.end());
        return SpaceDescriptor(std::move(f));
    }

    bool operator==(const SpaceDescriptor&) const = default;

   private:
    std::vector<Factor> factors_;
};

/// Two-level ion coupled to one mode.
inline SpaceDescriptor ion_mode_space(int cutoff) { return SpaceDescriptor({two_level(), ModeSpace(cutoff)}); }

/// Three-level ion (g, e, c) coupled to one mode.
inline SpaceDescriptor three_level_mode_space(int cutoff) {
    return SpaceDescriptor({three_level(), ModeSpace(cutoff)});
}

/// Two two-level ions sharing one mode.
inline SpaceDescriptor two_ion_mode_space(int cutoff) {
    return SpaceDescriptor({two_level(), two_level(), ModeSpace(cutoff)});
}

/// Product basis label: one level per internal factor followed by a Fock number.
struct BasisLabel {
    std::vector<Level> levels;
    int n = 0;
};

inline int basis_index(const SpaceDescriptor& space, const BasisLabel& label) {
    if (static_cast<int>(label.levels.size()) != space.internal_count())
        throw DimensionMismatch("basis label has wrong number of internal levels");
    std::vector<int> idx;
    for (std::size_t i = 0; i < label.levels.size(); ++i)
        idx.push_back(space.internal(static_cast<int>(i)).index(label.levels[i]));
    if (space.has_mode()) idx.push_back(label.n);
    else if (label.n != 0)
        throw InvalidArgument("basis label has a Fock number but space has no mode");
    return space.index(idx);
}

}  // namespace ionsel
