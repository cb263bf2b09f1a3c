#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lcc {

// Interned identifiers. Predicate and function symbols share one table
// (a name cannot be both); variables have their own.
using Sym = uint32_t;
using VarId = uint32_t;

// Variable ids with the high bit set are synthetic: generated during
// normalization / exploration and erased again by canonical renaming.
inline constexpr VarId kSyntheticBase = 0x40000000u;
// Rigid markers stand for extruded names shared between the two states of a
// bisimulation pair; they behave like free variables.
inline constexpr VarId kRigidBase = 0x60000000u;

inline bool is_synthetic(VarId v) { return v >= kSyntheticBase && v < kRigidBase; }
inline bool is_rigid_marker(VarId v) { return v >= kRigidBase; }

class Interner {
 public:
  uint32_t intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  const uint32_t* lookup(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    return it == ids_.end() ? nullptr : &it->second;
  }

  const std::string& name(uint32_t id) const { return names_[id]; }
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> ids_;
};

std::string var_display_name(const Interner& vars, VarId v);

}  // namespace lcc
