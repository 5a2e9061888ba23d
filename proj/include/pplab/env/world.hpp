#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace pplab::env {

struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(Cell, Cell) = default;
  friend constexpr auto operator<=>(Cell, Cell) = default;
};

// |dx| + |dy|; the pursuit distance for 4-connected movement.
constexpr int manhattan_distance(Cell p, Cell q) noexcept {
  const int dx = p.x > q.x ? p.x - q.x : q.x - p.x;
  const int dy = p.y > q.y ? p.y - q.y : q.y - p.y;
  return dx + dy;
}

// Canonical ordering: indices are used for table columns and tie-breaking.
enum class Action : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3, Stay = 4 };

inline constexpr std::size_t kActionCount = 5;
inline constexpr std::array<Action, kActionCount> kAllActions = {
    Action::Up, Action::Down, Action::Left, Action::Right, Action::Stay};

constexpr std::size_t index_of(Action a) noexcept { return static_cast<std::size_t>(a); }
constexpr Action action_from_index(std::size_t i) noexcept { return static_cast<Action>(i); }

// UP decreases y (row 0 is the top row).
constexpr Cell offset(Cell c, Action a) noexcept {
  switch (a) {
    case Action::Up: return {c.x, c.y - 1};
    case Action::Down: return {c.x, c.y + 1};
    case Action::Left: return {c.x - 1, c.y};
    case Action::Right: return {c.x + 1, c.y};
    case Action::Stay: return c;
  }
  return c;
}

std::string_view to_string(Action a) noexcept;

enum class Team : std::uint8_t { Predator, Prey };

struct AgentState {
  int id = 0;
  Team team = Team::Predator;
  Cell position;
  int stamina = 0;
  int speed = 1;
  bool alive = true;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct WorldState {
  std::vector<AgentState> agents;
  int timestep = 0;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

enum class TerminalReason : std::uint8_t { None, AllPreyCaptured, Timeout };

struct Capture {
  int predator = 0;
  int prey = 0;

  friend bool operator==(Capture, Capture) = default;
};

struct StepOutcome {
  WorldState next_state;
  std::vector<double> base_reward;
  std::vector<double> shaping;
  std::vector<Capture> captures;
  bool terminal = false;
  TerminalReason reason = TerminalReason::None;
};

}  // namespace pplab::env
