#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace mwb {

// A basic action: a bare name ("init", "xform") or an indexed family member
// ("load:0", "store:3"). "tau" is the silent action; it never carries an
// index and is not tied to any machine operation.
struct ActionId {
  std::string name;
  std::optional<std::uint32_t> index;

  ActionId() = default;
  explicit ActionId(std::string n) : name(std::move(n)) {}
  ActionId(std::string n, std::uint32_t i) : name(std::move(n)), index(i) {}

  static ActionId tau() { return ActionId("tau"); }
  static ActionId load(std::uint32_t n) { return ActionId("load", n); }
  static ActionId store(std::uint32_t n) { return ActionId("store", n); }

  bool is_tau() const { return name == "tau" && !index; }

  std::string str() const {
    return index ? name + ":" + std::to_string(*index) : name;
  }

  friend auto operator<=>(const ActionId&, const ActionId&) = default;
};

}  // namespace mwb
