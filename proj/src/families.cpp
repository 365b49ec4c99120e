// Copyright 2026-present the mdph project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Family catalog. The transition structures follow the usual descriptions of
// these environments; the reward constants (fractions of r_max - r_min) are
// fixed here and recorded in each MDP's metadata:
//   RiverSwim      left reward at state 0: 0.05, right end: 1.0
//   DeepSea        left dive: 0.01, bottom-right dive: 1.0
//   SimpleGrid     per step: 0.1, rewarding corners: 1.0, anti-corners: 0.0
//   FrozenLake     per step on ice: 0.01, goal: 1.0, holes: 0.0
//   MiniGrid*      goal cell: 1.0, elsewhere: 0.0
//   Taxi           per step: 0.05, correct drop-off: 1.0, wrong drop-off: 0.0
// MiniGridDoorKey additionally bakes a 0.1 random-action mix into its base
// kernel: without it the closed-door region would contain policy-closed
// rotation loops and the family could not be weakly communicating.

#include "mdph/families.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "mdph/error.hpp"

namespace mdph::families {

namespace {

constexpr double kDoorKeyActionNoise = 0.1;

// Cardinal directions, also used as MiniGrid orientations 0=E, 1=S, 2=W, 3=N.
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

struct Builder {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> transition;
  std::vector<double> reward_mean;
  std::vector<double> initial;
  std::vector<std::vector<double>> info;

  Builder(int s, int a) : n_states(s), n_actions(a) {
    transition.assign(static_cast<std::size_t>(s) * a * s, 0.0);
    reward_mean.assign(static_cast<std::size_t>(s) * a, 0.0);
    initial.assign(static_cast<std::size_t>(s), 0.0);
    info.resize(static_cast<std::size_t>(s));
  }
  double* row(int s, int a) {
    return &transition[(static_cast<std::size_t>(s) * n_actions + a) * n_states];
  }
  void set_reward(int s, int a, double mean) {
    reward_mean[static_cast<std::size_t>(s) * n_actions + a] = mean;
  }
};

// --------------------------------------------------------------------------
// RiverSwim
// --------------------------------------------------------------------------

Builder build_riverswim(const FamilySpec& spec) {
  const int n = spec.size;
  const double range = spec.r_max - spec.r_min;
  Builder b(n, 2);
  for (int s = 0; s < n; ++s) {
    b.row(s, 0)[std::max(s - 1, 0)] = 1.0;
    b.row(s, 1)[std::min(s + 1, n - 1)] = 1.0;
    b.set_reward(s, 0, spec.r_min);
    b.set_reward(s, 1, spec.r_min);
    b.info[s] = {static_cast<double>(s)};
  }
  b.set_reward(0, 0, spec.r_min + 0.05 * range);
  b.set_reward(n - 1, 1, spec.r_max);
  b.initial[0] = 1.0;
  return b;
}

// --------------------------------------------------------------------------
// DeepSea
// --------------------------------------------------------------------------

int deepsea_index(int row, int col) { return row * (row + 1) / 2 + col; }

Builder build_deepsea(const FamilySpec& spec) {
  const int n = spec.size;
  const double range = spec.r_max - spec.r_min;
  Builder b(n * (n + 1) / 2, 2);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= r; ++c) {
      const int s = deepsea_index(r, c);
      if (r + 1 < n) {
        b.row(s, 0)[deepsea_index(r + 1, c)] = 1.0;      // dive left
        b.row(s, 1)[deepsea_index(r + 1, c + 1)] = 1.0;  // dive right
      } else {
        b.row(s, 0)[deepsea_index(0, 0)] = 1.0;  // restart at the apex
        b.row(s, 1)[deepsea_index(0, 0)] = 1.0;
      }
      b.set_reward(s, 0, spec.r_min + 0.01 * range);
      b.set_reward(s, 1, spec.r_min);
      b.info[s] = {static_cast<double>(r), static_cast<double>(c)};
    }
  b.set_reward(deepsea_index(n - 1, n - 1), 1, spec.r_max);
  b.initial[deepsea_index(0, 0)] = 1.0;
  return b;
}

// --------------------------------------------------------------------------
// SimpleGrid
// --------------------------------------------------------------------------

Builder build_simple_grid(const FamilySpec& spec) {
  const int n = spec.size;
  const double range = spec.r_max - spec.r_min;
  auto idx = [n](int x, int y) { return y * n + x; };
  Builder b(n * n, 5);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const int s = idx(x, y);
      for (int a = 0; a < 4; ++a) {
        const int nx = std::clamp(x + kDx[a], 0, n - 1);
        const int ny = std::clamp(y + kDy[a], 0, n - 1);
        b.row(s, a)[idx(nx, ny)] = 1.0;
      }
      b.row(s, 4)[s] = 1.0;  // stay
      const bool plus = (x == 0 && y == 0) || (x == n - 1 && y == n - 1);
      const bool minus = (x == n - 1 && y == 0) || (x == 0 && y == n - 1);
      const double mean = plus ? spec.r_max : (minus ? spec.r_min : spec.r_min + 0.1 * range);
      for (int a = 0; a < 5; ++a) b.set_reward(s, a, mean);
      b.info[s] = {static_cast<double>(x), static_cast<double>(y)};
    }
  // Start in the central cells (four of them for even sizes).
  std::vector<int> centers;
  if (n % 2 == 1) {
    centers.push_back(idx(n / 2, n / 2));
  } else {
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) centers.push_back(idx(n / 2 - 1 + dx, n / 2 - 1 + dy));
  }
  for (int c : centers) b.initial[c] = 1.0 / static_cast<double>(centers.size());
  return b;
}

// --------------------------------------------------------------------------
// FrozenLake
// --------------------------------------------------------------------------

const char* kLake4[] = {"SFFF", "FHFH", "FFFH", "HFFG"};
const char* kLake8[] = {"SFFFFFFF", "FFFFFFFF", "FHFFFFFF", "FFFFFHFF",
                        "FFFHFFFF", "FHHFFFHF", "FHFFHFHF", "FFFHFFFG"};

bool lake_connected(const std::vector<std::string>& grid) {
  const int n = static_cast<int>(grid.size());
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  seen[0] = 1;
  int walkable = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (grid[y][x] != 'H') ++walkable;
  int visited = 0;
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    ++visited;
    for (int d = 0; d < 4; ++d) {
      const int nx = x + kDx[d], ny = y + kDy[d];
      if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
      if (grid[ny][nx] == 'H' || seen[ny * n + nx]) continue;
      seen[ny * n + nx] = 1;
      stack.emplace_back(nx, ny);
    }
  }
  return visited == walkable;
}

std::vector<std::string> lake_layout(int n, std::uint64_t seed) {
  if (n == 4) return {kLake4, kLake4 + 4};
  if (n == 8) return {kLake8, kLake8 + 8};
  Rng rng = Rng(seed).fork(0x1A4Eu);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<std::string> grid(static_cast<std::size_t>(n), std::string(static_cast<std::size_t>(n), 'F'));
    grid[0][0] = 'S';
    grid[n - 1][n - 1] = 'G';
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if (grid[y][x] == 'F' && rng.next_double() < 0.25) grid[y][x] = 'H';
    if (lake_connected(grid)) return grid;
  }
  throw Error("GenerationFailed", "no connected FrozenLake layout found");
}

Builder build_frozen_lake(const FamilySpec& spec) {
  const int n = spec.size;
  const double range = spec.r_max - spec.r_min;
  const auto grid = lake_layout(n, spec.seed);
  auto idx = [n](int x, int y) { return y * n + x; };
  int start = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (grid[y][x] == 'S') start = idx(x, y);

  Builder b(n * n, 4);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const int s = idx(x, y);
      const char tile = grid[y][x];
      b.info[s] = {static_cast<double>(x), static_cast<double>(y)};
      if (tile == 'H' || tile == 'G') {
        for (int a = 0; a < 4; ++a) {
          b.row(s, a)[start] = 1.0;
          b.set_reward(s, a, tile == 'G' ? spec.r_max : spec.r_min);
        }
        continue;
      }
      for (int a = 0; a < 4; ++a) {
        // Slippery ice: intended direction and both perpendiculars, 1/3 each.
        const int outcomes[3] = {a, (a + 1) % 4, (a + 3) % 4};
        for (int d : outcomes) {
          int nx = x + kDx[d], ny = y + kDy[d];
          if (nx < 0 || ny < 0 || nx >= n || ny >= n) {
            nx = x;
            ny = y;
          }
          b.row(s, a)[idx(nx, ny)] += 1.0 / 3.0;
        }
        b.set_reward(s, a, spec.r_min + 0.01 * range);
      }
    }
  b.initial[start] = 1.0;
  return b;
}

// --------------------------------------------------------------------------
// MiniGrid families
// --------------------------------------------------------------------------

struct BorderChoice {
  int side;          // 0=top, 1=bottom, 2=left, 3=right
  int opposite;
};

BorderChoice pick_border(std::uint64_t seed) {
  Rng rng = Rng(seed).fork(0xB0DEu);
  const int side = static_cast<int>(rng.next_below(4));
  const int opposite[4] = {1, 0, 3, 2};
  return {side, opposite[side]};
}

bool on_side(int x, int y, int side, int width) {
  switch (side) {
    case 0: return y == 0;
    case 1: return y == width - 1;
    case 2: return x == 0;
    default: return x == width - 1;
  }
}

std::pair<int, int> side_cell(int side, int offset, int width) {
  switch (side) {
    case 0: return {offset, 0};
    case 1: return {offset, width - 1};
    case 2: return {0, offset};
    default: return {width - 1, offset};
  }
}

/// Shared MG-Empty / MG-Rooms assembly over an arbitrary wall predicate.
Builder build_minigrid(const FamilySpec& spec, int width,
                       const std::vector<char>& is_wall, int goal_x, int goal_y,
                       int start_side) {
  auto cell = [width](int x, int y) { return y * width + x; };
  std::vector<int> state_of_cell(static_cast<std::size_t>(width) * width, -1);
  std::vector<std::pair<int, int>> cells;
  for (int y = 0; y < width; ++y)
    for (int x = 0; x < width; ++x)
      if (!is_wall[cell(x, y)]) {
        state_of_cell[cell(x, y)] = static_cast<int>(cells.size());
        cells.emplace_back(x, y);
      }
  const int n_cells = static_cast<int>(cells.size());
  Builder b(n_cells * 4, 3);
  auto state = [&](int x, int y, int o) { return state_of_cell[cell(x, y)] * 4 + o; };

  for (int ci = 0; ci < n_cells; ++ci) {
    const auto [x, y] = cells[ci];
    const bool at_goal = x == goal_x && y == goal_y;
    for (int o = 0; o < 4; ++o) {
      const int s = state(x, y, o);
      const int fx = x + kDx[o], fy = y + kDy[o];
      const bool open =
          fx >= 0 && fy >= 0 && fx < width && fy < width && !is_wall[cell(fx, fy)];
      b.row(s, 0)[open ? state(fx, fy, o) : s] = 1.0;  // forward (wall = no-op)
      b.row(s, 1)[state(x, y, (o + 3) % 4)] = 1.0;     // rotate left
      b.row(s, 2)[state(x, y, (o + 1) % 4)] = 1.0;     // rotate right
      for (int a = 0; a < 3; ++a) b.set_reward(s, a, at_goal ? spec.r_max : spec.r_min);
      b.info[s] = {static_cast<double>(x), static_cast<double>(y), static_cast<double>(o)};
    }
  }

  std::vector<int> starts;
  for (int ci = 0; ci < n_cells; ++ci) {
    const auto [x, y] = cells[ci];
    if (on_side(x, y, start_side, width) && !(x == goal_x && y == goal_y))
      for (int o = 0; o < 4; ++o) starts.push_back(state(x, y, o));
  }
  for (int s : starts) b.initial[s] = 1.0 / static_cast<double>(starts.size());
  return b;
}

Builder build_minigrid_empty(const FamilySpec& spec, std::string* side_name) {
  const int n = spec.size;
  const auto border = pick_border(spec.seed);
  const auto [gx, gy] = side_cell(border.opposite, n / 2, n);
  std::vector<char> walls(static_cast<std::size_t>(n) * n, 0);
  *side_name = std::to_string(border.side);
  return build_minigrid(spec, n, walls, gx, gy, border.side);
}

Builder build_minigrid_rooms(const FamilySpec& spec, std::string* side_name) {
  // Four size x size rooms in a 2 x 2 arrangement with one-cell doorways in
  // the middle of each shared wall segment.
  const int size = spec.size;
  const int w = 2 * size + 1;
  auto cell = [w](int x, int y) { return y * w + x; };
  std::vector<char> walls(static_cast<std::size_t>(w) * w, 0);
  for (int i = 0; i < w; ++i) {
    walls[cell(i, size)] = 1;
    walls[cell(size, i)] = 1;
  }
  const int near = size / 2, far = size + 1 + size / 2;
  walls[cell(near, size)] = 0;
  walls[cell(far, size)] = 0;
  walls[cell(size, near)] = 0;
  walls[cell(size, far)] = 0;

  const auto border = pick_border(spec.seed);
  const auto [gx, gy] = side_cell(border.opposite, size / 2, w);
  *side_name = std::to_string(border.side);
  return build_minigrid(spec, w, walls, gx, gy, border.side);
}

// --------------------------------------------------------------------------
// MiniGridDoorKey
// --------------------------------------------------------------------------

struct DoorKeyLayout {
  int wall_x = 0;
  int door_y = 0;
  int key_x = 0, key_y = 0;
};

DoorKeyLayout doorkey_layout(int n, std::uint64_t seed) {
  Rng rng = Rng(seed).fork(0xD0Cu);
  DoorKeyLayout l;
  l.wall_x = n / 2;
  l.door_y = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
  do {
    l.key_x = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(l.wall_x)));
    l.key_y = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
  } while (l.key_x == 0 && l.key_y == 0);
  return l;
}

Builder build_minigrid_doorkey(const FamilySpec& spec, DoorKeyLayout* layout_out) {
  const int n = spec.size;
  const auto l = doorkey_layout(n, spec.seed);
  *layout_out = l;

  // Phases: 0 = key on the floor, door closed (agent in the left room);
  //         1 = key held, door closed; 2 = key held, door open.
  // The state list holds only combinations reachable from the start.
  struct Cell {
    int x, y, o, phase;
  };
  auto left_room = [&](int x, int y) { return x < l.wall_x && y >= 0 && y < n && x >= 0; };
  auto walkable = [&](int x, int y, int phase) {
    if (x < 0 || y < 0 || x >= n || y >= n) return false;
    if (phase == 0) return left_room(x, y) && !(x == l.key_x && y == l.key_y);
    if (phase == 1) return left_room(x, y);
    if (x == l.wall_x) return y == l.door_y;  // open door cell
    return true;
  };
  std::vector<Cell> states;
  std::map<std::tuple<int, int, int, int>, int> index;
  for (int phase = 0; phase < 3; ++phase)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        if (!walkable(x, y, phase)) continue;
        for (int o = 0; o < 4; ++o) {
          index[{x, y, o, phase}] = static_cast<int>(states.size());
          states.push_back({x, y, o, phase});
        }
      }

  const int S = static_cast<int>(states.size());
  Builder b(S, 5);
  for (int s = 0; s < S; ++s) {
    const auto& st = states[s];
    const int fx = st.x + kDx[st.o], fy = st.y + kDy[st.o];
    // forward
    b.row(s, 0)[walkable(fx, fy, st.phase) ? index.at({fx, fy, st.o, st.phase}) : s] = 1.0;
    // rotations
    b.row(s, 1)[index.at({st.x, st.y, (st.o + 3) % 4, st.phase})] = 1.0;
    b.row(s, 2)[index.at({st.x, st.y, (st.o + 1) % 4, st.phase})] = 1.0;
    // pick: works only when facing the key with the key still on the floor
    if (st.phase == 0 && fx == l.key_x && fy == l.key_y)
      b.row(s, 3)[index.at({st.x, st.y, st.o, 1})] = 1.0;
    else
      b.row(s, 3)[s] = 1.0;
    // toggle: opens the door when facing it with the key in hand
    if (st.phase == 1 && fx == l.wall_x && fy == l.door_y)
      b.row(s, 4)[index.at({st.x, st.y, st.o, 2})] = 1.0;
    else
      b.row(s, 4)[s] = 1.0;

    const bool at_goal = st.phase == 2 && st.x == n - 1 && st.y == n - 1;
    for (int a = 0; a < 5; ++a) b.set_reward(s, a, at_goal ? spec.r_max : spec.r_min);
    b.info[s] = {static_cast<double>(st.x), static_cast<double>(st.y),
                 static_cast<double>(st.o), st.phase >= 1 ? 1.0 : 0.0,
                 st.phase == 2 ? 1.0 : 0.0};
  }
  for (int o = 0; o < 4; ++o) b.initial[index.at({0, 0, o, 0})] = 0.25;
  return b;
}

// --------------------------------------------------------------------------
// Taxi
// --------------------------------------------------------------------------

using WallSet = std::vector<std::pair<int, int>>;  // wall between (x,y) and (x+1,y)

bool taxi_connected(int n, const std::vector<char>& blocked) {
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 0;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    ++visited;
    const int x = c % n, y = c / n;
    auto push = [&](int nx, int ny) {
      const int t = ny * n + nx;
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    };
    if (y > 0) push(x, y - 1);
    if (y < n - 1) push(x, y + 1);
    if (x < n - 1 && !blocked[c]) push(x + 1, y);
    if (x > 0 && !blocked[y * n + x - 1]) push(x - 1, y);
  }
  return visited == n * n;
}

std::vector<char> taxi_walls(int n, std::uint64_t seed) {
  std::vector<char> blocked(static_cast<std::size_t>(n) * n, 0);  // indexed by left cell
  if (n == 5) {
    const WallSet classic = {{1, 0}, {1, 1}, {0, 3}, {0, 4}, {2, 3}, {2, 4}};
    for (auto [x, y] : classic) blocked[y * n + x] = 1;
    return blocked;
  }
  Rng rng = Rng(seed).fork(0x7A71u);
  const int segments = std::max(0, n - 3);
  const int length = std::max(1, n / 2);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::fill(blocked.begin(), blocked.end(), 0);
    for (int k = 0; k < segments; ++k) {
      const int x = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n - 1)));
      const bool from_top = rng.next_double() < 0.5;
      for (int i = 0; i < length; ++i) {
        const int y = from_top ? i : n - 1 - i;
        blocked[y * n + x] = 1;
      }
    }
    if (taxi_connected(n, blocked)) return blocked;
  }
  std::fill(blocked.begin(), blocked.end(), 0);
  return blocked;
}

Builder build_taxi(const FamilySpec& spec) {
  const int n = spec.size;
  const double range = spec.r_max - spec.r_min;
  const auto blocked = taxi_walls(n, spec.seed);
  const int depot_x[4] = {0, n - 1, 0, n - 1};
  const int depot_y[4] = {0, 0, n - 1, n - 1};
  auto idx = [n](int x, int y, int pass, int dest) {
    return ((y * n + x) * 5 + pass) * 4 + dest;
  };
  const int S = n * n * 5 * 4;
  Builder b(S, 6);

  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      for (int pass = 0; pass < 5; ++pass)
        for (int dest = 0; dest < 4; ++dest) {
          const int s = idx(x, y, pass, dest);
          b.info[s] = {static_cast<double>(x), static_cast<double>(y),
                       static_cast<double>(pass), static_cast<double>(dest),
                       pass == 4 ? 1.0 : 0.0};
          // Moves (walls only block east-west).
          for (int a = 0; a < 4; ++a) {
            int nx = x + kDx[a], ny = y + kDy[a];
            bool ok = nx >= 0 && ny >= 0 && nx < n && ny < n;
            if (ok && a == 0 && blocked[y * n + x]) ok = false;       // east
            if (ok && a == 2 && blocked[y * n + x - 1]) ok = false;   // west
            b.row(s, a)[ok ? idx(nx, ny, pass, dest) : s] = 1.0;
            b.set_reward(s, a, spec.r_min + 0.05 * range);
          }
          // Pickup.
          if (pass < 4 && x == depot_x[pass] && y == depot_y[pass])
            b.row(s, 4)[idx(x, y, 4, dest)] = 1.0;
          else
            b.row(s, 4)[s] = 1.0;
          b.set_reward(s, 4, spec.r_min + 0.05 * range);
          // Dropoff.
          if (pass == 4 && x == depot_x[dest] && y == depot_y[dest]) {
            for (int p2 = 0; p2 < 4; ++p2)
              for (int d2 = 0; d2 < 4; ++d2)
                if (p2 != d2) b.row(s, 5)[idx(x, y, p2, d2)] = 1.0 / 12.0;
            b.set_reward(s, 5, spec.r_max);
          } else {
            b.row(s, 5)[s] = 1.0;
            b.set_reward(s, 5, spec.r_min);
          }
        }
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      for (int p = 0; p < 4; ++p)
        for (int d = 0; d < 4; ++d)
          if (p != d) b.initial[idx(x, y, p, d)] = 1.0 / (n * n * 12.0);
  return b;
}

// --------------------------------------------------------------------------
// Assembly
// --------------------------------------------------------------------------

TabularMdp assemble(const FamilySpec& spec, Builder&& b,
                    std::map<std::string, std::string> extra) {
  std::vector<RewardDist> rewards(b.reward_mean.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    rewards[i] = spec.make_reward_stochastic
                     ? RewardDist::scaled_beta(b.reward_mean[i], spec.reward_variance, spec.r_min,
                                               spec.r_max)
                     : RewardDist::deterministic(b.reward_mean[i], spec.r_min, spec.r_max);
  }
  Setting setting = Setting::continuous();
  int horizon = 0;
  if (spec.episodic) {
    horizon = spec.horizon > 0 ? spec.horizon : default_horizon(spec.family, spec.size);
    setting = Setting::episodic_with(horizon);
  }
  TabularMdp mdp = build_mdp(b.n_states, b.n_actions, std::move(b.transition), std::move(rewards),
                             std::move(b.initial), setting, spec.r_min, spec.r_max);
  if (spec.family == Family::MiniGridDoorKey)
    mdp = perturb_kernel(mdp, kDoorKeyActionNoise, 0.0);
  mdp = perturb_kernel(mdp, spec.p_rand, spec.p_lazy);
  mdp.state_info = std::move(b.info);

  mdp.metadata["family"] = to_string(spec.family);
  mdp.metadata["size"] = std::to_string(spec.size);
  mdp.metadata["p_rand"] = std::to_string(spec.p_rand);
  mdp.metadata["p_lazy"] = std::to_string(spec.p_lazy);
  mdp.metadata["seed"] = std::to_string(spec.seed);
  mdp.metadata["make_reward_stochastic"] = spec.make_reward_stochastic ? "true" : "false";
  mdp.metadata["r_min"] = std::to_string(spec.r_min);
  mdp.metadata["r_max"] = std::to_string(spec.r_max);
  if (spec.episodic) mdp.metadata["horizon"] = std::to_string(horizon);
  for (auto& [k, v] : extra) mdp.metadata[k] = v;
  return mdp;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::RiverSwim: return "riverswim";
    case Family::DeepSea: return "deepsea";
    case Family::SimpleGrid: return "simple_grid";
    case Family::FrozenLake: return "frozen_lake";
    case Family::MiniGridEmpty: return "minigrid_empty";
    case Family::MiniGridRooms: return "minigrid_rooms";
    case Family::MiniGridDoorKey: return "minigrid_doorkey";
    case Family::Taxi: return "taxi";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "riverswim") return Family::RiverSwim;
  if (name == "deepsea") return Family::DeepSea;
  if (name == "simple_grid") return Family::SimpleGrid;
  if (name == "frozen_lake") return Family::FrozenLake;
  if (name == "minigrid_empty") return Family::MiniGridEmpty;
  if (name == "minigrid_rooms") return Family::MiniGridRooms;
  if (name == "minigrid_doorkey") return Family::MiniGridDoorKey;
  if (name == "taxi") return Family::Taxi;
  throw Error("UnknownFamily", "no family named '" + name + "'");
}

int family_min_size(Family f) {
  switch (f) {
    case Family::RiverSwim:
    case Family::DeepSea:
    case Family::SimpleGrid:
    case Family::MiniGridEmpty:
    case Family::MiniGridRooms:
      return 2;
    case Family::FrozenLake:
    case Family::MiniGridDoorKey:
    case Family::Taxi:
      return 3;
  }
  return 2;
}

int default_horizon(Family f, int size) {
  switch (f) {
    case Family::RiverSwim:
      return 2 * size;
    case Family::DeepSea:
      return size;  // one dive per step
    default:
      return std::max(1, 2 * (size - 1));
  }
}

TabularMdp generate(const FamilySpec& spec) {
  if (spec.size < family_min_size(spec.family))
    throw Error("SizeTooSmall", std::string(to_string(spec.family)) + " needs size >= " +
                                    std::to_string(family_min_size(spec.family)) + ", got " +
                                    std::to_string(spec.size));
  if (spec.family == Family::DeepSea && spec.p_lazy > 0.0)
    throw Error("UnsupportedParam", "DeepSea does not support p_lazy");
  if (spec.r_max <= spec.r_min)
    throw Error("ParamOutOfRange", "r_max must exceed r_min");

  std::map<std::string, std::string> extra;
  switch (spec.family) {
    case Family::RiverSwim:
      return assemble(spec, build_riverswim(spec), std::move(extra));
    case Family::DeepSea:
      return assemble(spec, build_deepsea(spec), std::move(extra));
    case Family::SimpleGrid:
      return assemble(spec, build_simple_grid(spec), std::move(extra));
    case Family::FrozenLake: {
      const auto grid = lake_layout(spec.size, spec.seed);
      std::string map;
      for (const auto& row : grid) map += row + ";";
      extra["map"] = map;
      return assemble(spec, build_frozen_lake(spec), std::move(extra));
    }
    case Family::MiniGridEmpty: {
      std::string side;
      Builder b = build_minigrid_empty(spec, &side);
      extra["start_side"] = side;
      return assemble(spec, std::move(b), std::move(extra));
    }
    case Family::MiniGridRooms: {
      std::string side;
      Builder b = build_minigrid_rooms(spec, &side);
      extra["start_side"] = side;
      return assemble(spec, std::move(b), std::move(extra));
    }
    case Family::MiniGridDoorKey: {
      DoorKeyLayout layout;
      Builder b = build_minigrid_doorkey(spec, &layout);
      extra["door"] = std::to_string(layout.wall_x) + "," + std::to_string(layout.door_y);
      extra["key"] = std::to_string(layout.key_x) + "," + std::to_string(layout.key_y);
      extra["action_noise"] = std::to_string(kDoorKeyActionNoise);
      return assemble(spec, std::move(b), std::move(extra));
    }
    case Family::Taxi:
      return assemble(spec, build_taxi(spec), std::move(extra));
  }
  throw Error("UnknownFamily", "unhandled family");
}

FamilySpec sample_spec(Family family, std::uint64_t seed, int size_lo, int size_hi,
                       double stochasticity_lo, double stochasticity_hi) {
  if (size_lo > size_hi || size_lo < family_min_size(family))
    throw Error("EmptyRange", "invalid size range");
  if (stochasticity_lo > stochasticity_hi || stochasticity_lo < 0.0 || stochasticity_hi >= 1.0)
    throw Error("EmptyRange", "stochasticity range must sit inside [0,1)");
  Rng rng = Rng(seed).fork(0x5A3Cu);
  FamilySpec spec;
  spec.family = family;
  spec.seed = seed;
  spec.size = size_lo + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(size_hi - size_lo + 1)));
  spec.p_rand = stochasticity_lo + rng.next_double() * (stochasticity_hi - stochasticity_lo);
  spec.p_lazy = family == Family::DeepSea
                    ? 0.0
                    : stochasticity_lo + rng.next_double() * (stochasticity_hi - stochasticity_lo);
  return spec;
}

}  // namespace mdph::families
