#include "flagvar/roots.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>

#include "flagvar/error.hpp"

namespace flagvar {

Root Root::operator-() const {
  Root out = *this;
  for (int& c : out.coords) c = -c;
  return out;
}

Root Root::operator+(const Root& other) const {
  Root out = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) out.coords[i] += other.coords[i];
  return out;
}

Root Root::operator-(const Root& other) const { return *this + (-other); }

bool Root::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](int c) { return c == 0; });
}

std::size_t RootHash::operator()(const Root& r) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (int c : r.coords) h ^= std::hash<int>{}(c) + 0x9e3779b9 + (h << 6) + (h >> 2);
  return h;
}

RootSystem::RootSystem(Family family, int rank) : family_(family), rank_(rank) {
  const int dim = ambient_dimension();
  if (family == Family::A) {
    for (int i = 1; i <= dim; ++i)
      for (int j = i + 1; j <= dim; ++j) positive_.push_back(difference(i, j));
    for (int i = 1; i < dim; ++i) simple_.push_back(difference(i, i + 1));
  } else {
    for (int i = 1; i <= dim; ++i) {
      for (int j = i + 1; j <= dim; ++j) {
        positive_.push_back(difference(i, j));
        positive_.push_back(sum(i, j));
      }
    }
    for (int i = 1; i <= dim; ++i) positive_.push_back(sum(i, i));
    for (int i = 1; i < dim; ++i) simple_.push_back(difference(i, i + 1));
    simple_.push_back(sum(dim, dim));
  }
  roots_ = positive_;
  for (const Root& r : positive_) roots_.push_back(-r);
}

Root RootSystem::difference(int i, int j) const {
  Root r{std::vector<int>(ambient_dimension(), 0)};
  r.coords[i - 1] += 1;
  r.coords[j - 1] -= 1;
  return r;
}

Root RootSystem::sum(int i, int j) const {
  Root r{std::vector<int>(ambient_dimension(), 0)};
  r.coords[i - 1] += 1;
  r.coords[j - 1] += 1;
  return r;
}

bool RootSystem::contains(const Root& r) const {
  return std::find(roots_.begin(), roots_.end(), r) != roots_.end();
}

bool RootSystem::is_positive(const Root& r) const { return positive_index(r) >= 0; }

int RootSystem::positive_index(const Root& r) const {
  auto it = std::find(positive_.begin(), positive_.end(), r);
  return it == positive_.end() ? -1 : static_cast<int>(it - positive_.begin());
}

int RootSystem::simple_index(const Root& r) const {
  auto it = std::find(simple_.begin(), simple_.end(), r);
  return it == simple_.end() ? -1 : static_cast<int>(it - simple_.begin());
}

std::vector<int> RootSystem::simple_coordinates(const Root& r) const {
  // Simple roots are e_k - e_{k+1} (plus 2 e_l for C), so the coefficient of
  // the k-th simple root is a partial sum of the epsilon coordinates.
  std::vector<int> out(rank_, 0);
  int partial = 0;
  for (int k = 0; k < rank_; ++k) {
    partial += r.coords[k];
    out[k] = partial;
  }
  if (family_ == Family::C) out[rank_ - 1] /= 2;
  return out;
}

std::string RootSystem::label(const Root& r) const {
  Root p = r;
  std::string sign;
  if (!is_positive(p)) {
    p = -r;
    sign = "-";
  }
  int i = -1, j = -1;
  bool plus = false;
  for (int k = 0; k < ambient_dimension(); ++k) {
    if (p.coords[k] == 2) {
      i = j = k + 1;
    } else if (p.coords[k] == 1) {
      if (i < 0) {
        i = k + 1;
      } else {
        j = k + 1;
        plus = true;
      }
    } else if (p.coords[k] == -1) {
      j = k + 1;
    }
  }
  const std::string sep = (i >= 10 || j >= 10) ? "," : "";
  return sign + "a" + std::to_string(i) + sep + std::to_string(j) + (plus ? "+" : "");
}

Root RootSystem::parse(const std::string& text) const {
  auto fail = [&]() -> Root { throw Error(ErrorKind::Usage, "malformed root label '" + text + "'"); };
  std::string s = text;
  bool negative = false;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.erase(s.begin());
  }
  if (s.size() < 3 || (s.front() != 'a' && s.front() != 'A')) return fail();
  s.erase(s.begin());
  bool plus = false;
  if (s.back() == '+') {
    plus = true;
    s.pop_back();
  }
  int i = 0, j = 0;
  if (auto comma = s.find(','); comma != std::string::npos) {
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    if (a.empty() || b.empty() || !std::all_of(a.begin(), a.end(), ::isdigit) ||
        !std::all_of(b.begin(), b.end(), ::isdigit))
      return fail();
    i = std::stoi(a);
    j = std::stoi(b);
  } else {
    if (s.size() != 2 || !std::isdigit(s[0]) || !std::isdigit(s[1])) return fail();
    i = s[0] - '0';
    j = s[1] - '0';
  }
  const int dim = ambient_dimension();
  if (i < 1 || j < 1 || i > dim || j > dim) return fail();
  Root r;
  if (i == j) {
    if (family_ != Family::C || plus) return fail();
    r = sum(i, i);
  } else if (plus) {
    if (family_ != Family::C || i > j) return fail();
    r = sum(i, j);
  } else {
    r = difference(i, j);
  }
  if (!contains(r)) return fail();
  return negative ? -r : r;
}

RootSystem build_root_system(Family family, int rank) {
  if (family == Family::A && rank < 1)
    throw Error(ErrorKind::Configuration, "type A needs rank >= 1");
  if (family == Family::C && rank < 2)
    throw Error(ErrorKind::Configuration, "type C needs rank >= 2");
  return RootSystem(family, rank);
}

std::string to_string(Family family) { return family == Family::A ? "A" : "C"; }

Family parse_family(const std::string& text) {
  if (text == "A" || text == "a") return Family::A;
  if (text == "C" || text == "c") return Family::C;
  throw Error(ErrorKind::Configuration, "unsupported root family '" + text + "'");
}

}  // namespace flagvar
