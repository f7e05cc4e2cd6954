#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace flagvar {

enum class Family { A, C };

/// A root written in the epsilon-functional basis. Equality and ordering are
/// exact on the integer coordinates.
struct Root {
  std::vector<int> coords;

  Root operator-() const;
  Root operator+(const Root& other) const;
  Root operator-(const Root& other) const;
  bool is_zero() const;

  auto operator<=>(const Root&) const = default;
  bool operator==(const Root&) const = default;
};

struct RootHash {
  std::size_t operator()(const Root& r) const noexcept;
};

class RootSystem {
 public:
  RootSystem(Family family, int rank);

  Family family() const { return family_; }
  int rank() const { return rank_; }
  /// Number of epsilon coordinates (rank + 1 for A, rank for C).
  int ambient_dimension() const { return family_ == Family::A ? rank_ + 1 : rank_; }

  /// Positive roots first (in the conventional listing order), then their negatives.
  const std::vector<Root>& roots() const { return roots_; }
  const std::vector<Root>& positive() const { return positive_; }
  const std::vector<Root>& simple() const { return simple_; }

  bool contains(const Root& r) const;
  bool is_positive(const Root& r) const;
  /// Position in positive(), or -1.
  int positive_index(const Root& r) const;
  /// Position in simple(), or -1.
  int simple_index(const Root& r) const;

  /// Integer coordinates of r over the simple roots.
  std::vector<int> simple_coordinates(const Root& r) const;

  /// "a12", "a12+", "a11" (C only); negatives carry a leading '-'.
  std::string label(const Root& r) const;
  /// Inverse of label(); throws a usage error on malformed or unknown labels.
  Root parse(const std::string& label) const;

  /// Convenience constructors in epsilon coordinates (1-based indices).
  Root difference(int i, int j) const;  // e_i - e_j
  Root sum(int i, int j) const;         // e_i + e_j, i == j gives 2 e_i

 private:
  Family family_;
  int rank_;
  std::vector<Root> roots_;
  std::vector<Root> positive_;
  std::vector<Root> simple_;
};

/// Throws a configuration error for unsupported combinations (A needs rank >= 1,
/// C needs rank >= 2).
RootSystem build_root_system(Family family, int rank);

std::string to_string(Family family);
Family parse_family(const std::string& text);

}  // namespace flagvar
