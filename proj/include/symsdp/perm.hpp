#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace symsdp {

// Permutation of {0, ..., n-1} stored as a dense image array:
// images[i] = pi(i).
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
      if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v])
        throw std::invalid_argument("Permutation: images are not a bijection");
      seen[v] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
  }

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i]; }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(images_.size());
    for (int i = 0; i < size(); ++i) inv[images_[i]] = i;
    Permutation p;
    p.images_ = std::move(inv);
    return p;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.images_ == b.images_;
  }
  friend bool operator<(const Permutation& a, const Permutation& b) {
    return a.images_ < b.images_;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < size(); ++i) {
      if (i) s += ",";
      s += std::to_string(images_[i]);
    }
    return s + "]";
  }

  // Cycle notation on moved points, e.g. "(0 2 1)(3 4)"; "()" for identity.
  std::string cycles() const {
    std::string s;
    std::vector<char> done(images_.size(), 0);
    for (int i = 0; i < size(); ++i) {
      if (done[i] || images_[i] == i) continue;
      s += "(" + std::to_string(i);
      done[i] = 1;
      for (int j = images_[i]; j != i; j = images_[j]) {
        s += " " + std::to_string(j);
        done[j] = 1;
      }
      s += ")";
    }
    return s.empty() ? "()" : s;
  }

 private:
  std::vector<int> images_;
};

// Composition with the convention (p*q)(i) = p(q(i)).
inline Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("compose: domain size mismatch");
  std::vector<int> img(p.size());
  for (int i = 0; i < p.size(); ++i) img[i] = p(q(i));
  return Permutation(std::move(img));
}

inline Permutation operator*(const Permutation& p, const Permutation& q) {
  return compose(p, q);
}

}  // namespace symsdp
