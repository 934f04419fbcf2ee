#pragma once

#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wreath/group.hpp"

namespace wreath {

struct BallEntry {
  GroupElement element;
  Int length;
};

struct SearchLimits {
  std::size_t max_states = 4'000'000; // practical memory cap, documented
};

/// All elements of word length <= radius with their exact lengths, by
/// breadth-first search over the Cayley graph. Output is in BFS discovery
/// order, which is deterministic. Throws ResourceLimit (with the number of
/// states explored so far) if the ball outgrows the state budget.
std::vector<BallEntry> ball(const Group &group, const GeneratingSet &gens,
                            Int radius, SearchLimits limits = {});

/// Exact word length of x, by closed form when the generating set is the
/// standard one and every factor has a closed form, else by BFS from the
/// identity. Returns nullopt ("unreachable") when the BFS would have to go
/// past cap; closed-form values are returned regardless of cap.
std::optional<Int> word_norm(const Group &group, const GeneratingSet &gens,
                             const GroupElement &x, Int cap,
                             SearchLimits limits = {});

/**
 * Lazily grown BFS norm table for repeated word-length queries against one
 * (group, generating set) pair. Closed forms short-circuit the table. Grows
 * only while being queried; share between threads only after the last call
 * that can grow it.
 */
class NormCache {
public:
  NormCache(Group group, GeneratingSet gens, SearchLimits limits = {});

  /// Exact norm, or nullopt if it exceeds cap.
  std::optional<Int> norm(const GroupElement &x, Int cap);

  const Group &group() const { return group_; }
  Int grown_radius() const { return radius_; }
  bool uses_closed_form() const { return closed_form_; }
  std::size_t table_size() const { return dist_.size(); }

  /// Optional persistence: the table reloads from / saves to
  /// <dir>/norms-<key>.json. Failures to load are silent; saving throws on
  /// I/O errors.
  bool try_load(const std::string &dir);
  void save(const std::string &dir) const;

private:
  void grow_to(Int radius);
  std::string cache_key() const;

  Group group_;
  GeneratingSet gens_;
  SearchLimits limits_;
  bool closed_form_ = false;
  std::unordered_map<GroupElement, Int, GroupElementHash> dist_;
  std::deque<GroupElement> frontier_;
  Int radius_ = 0;
  std::vector<GroupElement> step_; // generators and their inverses
};

} // namespace wreath
