#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "mwb/machine.hpp"

using namespace mwb;

namespace {

// Three one-bit cells x, y, c wired into little hand-analysed operations.
LayoutPtr micro_layout() {
  return MemoryLayout::make({
      {"x", 1, {2, false}},
      {"y", 1, {2, false}},
      {"c", 1, {2, false}},
  });
}

const MemoryElementId X{"x", 0}, Y{"y", 0}, C{"c", 0};

Operation op(std::string name,
             std::function<MachineState(const MachineState&)> eval) {
  Operation o;
  o.name = std::move(name);
  o.eval = std::move(eval);
  return o;
}

}  // namespace

TEST_CASE("layout construction and validation") {
  const LayoutPtr layout = MemoryLayout::make({
      {"data", 2, {4, false}},
      {"rr", 1, {2, true}},
  });
  CHECK(layout->cell_count() == 3);
  CHECK(layout->regions().size() == 2);
  REQUIRE(layout->find_region("data") != nullptr);
  CHECK(layout->find_region("data")->count == 2);
  CHECK(layout->find_region("nope") == nullptr);

  CHECK(layout->index_of({"data", 1}) < layout->cell_count());
  CHECK(layout->domain(layout->index_of({"rr", 0})).flag);
  CHECK_FALSE(layout->try_index_of({"data", 2}).has_value());
  CHECK_FALSE(layout->try_index_of({"ghost", 0}).has_value());
  CHECK_THROWS_AS(layout->index_of({"ghost", 0}), Error);

  CHECK(layout->state_count(kDefaultStateCap) == 32);  // 4 * 4 * 2

  SUBCASE("bad region lists are rejected") {
    CHECK_THROWS_AS(MemoryLayout::make({{"a", 1, {2, false}},
                                        {"a", 1, {2, false}}}),
                    Error);
    CHECK_THROWS_AS(MemoryLayout::make({{"", 1, {2, false}}}), Error);
    CHECK_THROWS_AS(MemoryLayout::make({{"a", 0, {2, false}}}), Error);
    CHECK_THROWS_AS(MemoryLayout::make({{"a", 1, {0, false}}}), Error);
    CHECK_THROWS_AS(MemoryLayout::make({{"a", 1, {3, true}}}), Error);
  }

  SUBCASE("state cap") {
    const LayoutPtr big = MemoryLayout::make({{"w", 64, {1ull << 32, false}}});
    CHECK_THROWS_AS(big->state_count(kDefaultStateCap), StateSpaceTooLarge);
  }

  SUBCASE("canonical order sorts by region name, then offset") {
    const LayoutPtr mixed = MemoryLayout::make({
        {"z", 2, {2, false}},
        {"a", 1, {2, false}},
    });
    const auto& order = mixed->canonical_order();
    REQUIRE(order.size() == 3);
    CHECK(mixed->cell(order[0]) == MemoryElementId{"a", 0});
    CHECK(mixed->cell(order[1]) == MemoryElementId{"z", 0});
    CHECK(mixed->cell(order[2]) == MemoryElementId{"z", 1});
  }
}

TEST_CASE("states index, mutate and digest") {
  const LayoutPtr layout = MemoryLayout::make({
      {"a", 2, {2, false}},
      {"b", 1, {3, false}},
  });
  const std::uint64_t total = layout->state_count(kDefaultStateCap);
  CHECK(total == 12);

  SUBCASE("from_index and index are inverse over the whole state set") {
    for (std::uint64_t i = 0; i < total; ++i) {
      CHECK(MachineState::from_index(layout, i).index() == i);
    }
  }
  SUBCASE("fresh states are all zero") {
    const MachineState s(layout);
    CHECK(s.index() == 0);
    for (std::size_t c = 0; c < layout->cell_count(); ++c) {
      CHECK(s.get(c) == 0);
    }
  }
  SUBCASE("set respects domains") {
    MachineState s(layout);
    s.set({"b", 0}, 2);
    CHECK(s.get(MemoryElementId{"b", 0}) == 2);
    CHECK_THROWS_AS(s.set({"b", 0}, 3), Error);
    CHECK_THROWS_AS(s.set({"a", 0}, 2), Error);
  }
  SUBCASE("digest and equality") {
    MachineState s(layout), t(layout);
    CHECK(s == t);
    CHECK(s.digest() == t.digest());
    t.set({"a", 1}, 1);
    CHECK_FALSE(s == t);
    CHECK(s.digest() != t.digest());

    const auto diff = differing_cells(s, t);
    REQUIRE(diff.size() == 1);
    CHECK(layout->cell(diff[0]) == MemoryElementId{"a", 1});
  }
  SUBCASE("states on different layouts never compare equal") {
    const MachineState s(layout);
    const MachineState t(micro_layout());
    CHECK_FALSE(s == t);
  }
}

TEST_CASE("input and output regions by exhaustive sweep") {
  const LayoutPtr layout = micro_layout();
  using Cells = std::set<MemoryElementId>;

  SUBCASE("the identity touches nothing") {
    const OperationRegions r = compute_regions(
        op("id", [](const MachineState& s) { return s; }), layout);
    CHECK(r.input.empty());
    CHECK(r.output.empty());
  }
  SUBCASE("copy y := x") {
    const OperationRegions r = compute_regions(
        op("copy", [](const MachineState& s) {
          MachineState out = s;
          out.set(Y, s.get(X));
          return out;
        }),
        layout);
    CHECK(r.input == Cells{X});
    CHECK(r.output == Cells{Y});
  }
  SUBCASE("xor c := x ^ y") {
    const OperationRegions r = compute_regions(
        op("xor", [](const MachineState& s) {
          MachineState out = s;
          out.set(C, s.get(X) ^ s.get(Y));
          return out;
        }),
        layout);
    CHECK(r.input == Cells{X, Y});
    CHECK(r.output == Cells{C});
  }
  SUBCASE("swap x and y") {
    const OperationRegions r = compute_regions(
        op("swap", [](const MachineState& s) {
          MachineState out = s;
          out.set(X, s.get(Y));
          out.set(Y, s.get(X));
          return out;
        }),
        layout);
    CHECK(r.input == Cells{X, Y});
    CHECK(r.output == Cells{X, Y});
  }
  SUBCASE("a constant write has an output but no input") {
    const OperationRegions r = compute_regions(
        op("setc", [](const MachineState& s) {
          MachineState out = s;
          out.set(C, 1);
          return out;
        }),
        layout);
    CHECK(r.input.empty());
    CHECK(r.output == Cells{C});
  }
  SUBCASE("pass-through into a written cell counts as input") {
    // y := x when c is set, else unchanged. The old y flows into the output
    // region (through the c=0 case), so y itself is part of the input.
    const OperationRegions r = compute_regions(
        op("guarded", [](const MachineState& s) {
          MachineState out = s;
          if (s.get(C) == 1) out.set(Y, s.get(X));
          return out;
        }),
        layout);
    CHECK(r.input == Cells{X, Y, C});
    CHECK(r.output == Cells{Y});
  }
  SUBCASE("input_region and output_region match compute_regions") {
    const Operation o = op("copy", [](const MachineState& s) {
      MachineState out = s;
      out.set(Y, s.get(X));
      return out;
    });
    const OperationRegions r = compute_regions(o, layout);
    CHECK(input_region(o, layout) == r.input);
    CHECK(output_region(o, layout) == r.output);
  }
  SUBCASE("region computation respects the cap") {
    const LayoutPtr big = MemoryLayout::make({{"w", 64, {1ull << 32, false}}});
    CHECK_THROWS_AS(
        compute_regions(op("id", [](const MachineState& s) { return s; }),
                        big),
        StateSpaceTooLarge);
  }
}

TEST_CASE("machine validation focuses on the reply-cell condition") {
  const LayoutPtr layout = MemoryLayout::make({
      {"x", 1, {2, false}},
      {"rr", 1, {2, true}},
  });
  MaurerMachine m;
  m.layout = layout;
  m.operations[ActionId("poke")] = op("poke", [](const MachineState& s) {
    MachineState out = s;
    out.set({"rr", 0}, 1);
    return out;
  });
  m.reply_cell[ActionId("poke")] = {"rr", 0};

  SUBCASE("a well-formed machine satisfies the checklist") {
    const auto diags = validate_machine(m);
    CHECK(all_satisfied(diags));
    // Conditions 1 and 2 hold by construction and are reported as such.
    bool saw1 = false, saw2 = false, saw3 = false;
    for (const auto& d : diags) {
      if (d.condition == 1) saw1 = true;
      if (d.condition == 2) saw2 = true;
      if (d.condition == 3) saw3 = true;
    }
    CHECK(saw1);
    CHECK(saw2);
    CHECK(saw3);
  }
  SUBCASE("a missing reply cell fails condition 3") {
    m.reply_cell.erase(ActionId("poke"));
    CHECK_FALSE(all_satisfied(validate_machine(m)));
  }
  SUBCASE("a reply cell outside the layout fails condition 3") {
    m.reply_cell[ActionId("poke")] = {"ghost", 0};
    CHECK_FALSE(all_satisfied(validate_machine(m)));
  }
  SUBCASE("a reply cell without a T/F domain fails condition 3") {
    m.reply_cell[ActionId("poke")] = {"x", 0};
    const auto diags = validate_machine(m);
    CHECK_FALSE(all_satisfied(diags));
    bool flagged = false;
    for (const auto& d : diags) {
      if (d.condition == 3 && !d.satisfied) flagged = true;
    }
    CHECK(flagged);
  }
  SUBCASE("find_operation and find_reply_cell") {
    CHECK(m.find_operation(ActionId("poke")) != nullptr);
    CHECK(m.find_operation(ActionId("nope")) == nullptr);
    REQUIRE(m.find_reply_cell(ActionId("poke")) != nullptr);
    CHECK(*m.find_reply_cell(ActionId("poke")) == MemoryElementId{"rr", 0});
  }
}

TEST_CASE("tabulated operations") {
  const LayoutPtr layout = MemoryLayout::make({{"x", 1, {2, false}}});

  SUBCASE("a complete table evaluates as written") {
    std::vector<std::pair<MachineState, MachineState>> table;
    for (std::uint64_t i = 0; i < 2; ++i) {
      MachineState in = MachineState::from_index(layout, i);
      MachineState out = MachineState::from_index(layout, 1 - i);  // NOT
      table.emplace_back(std::move(in), std::move(out));
    }
    const Operation o = tabulate_operation("not", table, layout);
    for (std::uint64_t i = 0; i < 2; ++i) {
      CHECK(o.eval(MachineState::from_index(layout, i)).index() == 1 - i);
    }
  }
  SUBCASE("missing and duplicate inputs are rejected") {
    std::vector<std::pair<MachineState, MachineState>> table;
    table.emplace_back(MachineState::from_index(layout, 0),
                       MachineState::from_index(layout, 0));
    CHECK_THROWS_AS(tabulate_operation("partial", table, layout), Error);
    table.emplace_back(MachineState::from_index(layout, 0),
                       MachineState::from_index(layout, 1));
    CHECK_THROWS_AS(tabulate_operation("dup", table, layout), Error);
  }
}
