#pragma once

#include <string>
#include <vector>

#include "sepsys/errors.hpp"
#include "sepsys/separation_system.hpp"

namespace sepsys {

using Point = int;

// A finite directed poset of index points. Directedness gives a maximum,
// which is computed and kept.
class DirectedPoset {
public:
  DirectedPoset() = default;

  static DirectedPoset from_generators(std::vector<std::string> labels,
                                       const std::vector<std::pair<Point, Point>>& generators) {
    const int n = static_cast<int>(labels.size());
    Relation rel(n);
    for (auto [a, b] : generators) {
      if (a < 0 || a >= n || b < 0 || b >= n) throw UnknownPoint("poset generator out of range");
      rel.set(a, b);
    }
    rel.close_transitively();
    return validated(std::move(labels), std::move(rel));
  }

  static DirectedPoset chain(int n) {
    std::vector<std::string> labels;
    std::vector<std::pair<Point, Point>> gens;
    for (int i = 0; i < n; ++i) {
      labels.push_back(std::to_string(i + 1));
      if (i > 0) gens.emplace_back(i - 1, i);
    }
    return from_generators(std::move(labels), gens);
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(Point p) const {
    require(p);
    return labels_[p];
  }
  bool leq(Point p, Point q) const {
    require(p);
    require(q);
    return leq_.get(p, q);
  }
  bool lt(Point p, Point q) const { return p != q && leq(p, q); }
  Point max_point() const { return max_; }

  void require(Point p) const {
    if (p < 0 || p >= size()) throw UnknownPoint("point id " + std::to_string(p));
  }

  std::optional<Point> find(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  // q covers p: q > p with nothing strictly between.
  std::vector<std::pair<Point, Point>> covers() const {
    std::vector<std::pair<Point, Point>> out;
    for (Point q = 0; q < size(); ++q)
      for (Point p = 0; p < size(); ++p) {
        if (!lt(p, q)) continue;
        bool cover = true;
        for (Point r = 0; r < size() && cover; ++r)
          if (lt(p, r) && lt(r, q)) cover = false;
        if (cover) out.emplace_back(q, p);
      }
    return out;
  }

  // Points >= p, in table order.
  std::vector<Point> up_set(Point p) const {
    std::vector<Point> out;
    for (Point q = 0; q < size(); ++q)
      if (leq(p, q)) out.push_back(q);
    return out;
  }

  // The induced poset on {q : q >= p0}, plus the old->new point map.
  std::pair<DirectedPoset, std::vector<Point>> filter_up(Point p0) const {
    std::vector<Point> keep = up_set(p0);
    std::vector<Point> old_to_new(size(), -1);
    for (size_t i = 0; i < keep.size(); ++i) old_to_new[keep[i]] = static_cast<Point>(i);
    std::vector<std::string> labels;
    for (Point p : keep) labels.push_back(labels_[p]);
    Relation rel(static_cast<int>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i)
      for (size_t j = 0; j < keep.size(); ++j)
        if (leq(keep[i], keep[j])) rel.set(static_cast<int>(i), static_cast<int>(j));
    return {validated(std::move(labels), std::move(rel)), std::move(old_to_new)};
  }

private:
  static DirectedPoset validated(std::vector<std::string> labels, Relation rel) {
    const int n = static_cast<int>(labels.size());
    if (n == 0) throw NotDirected("empty index poset");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rel.get(i, j) && rel.get(j, i))
          throw CycleError("poset points " + labels[i] + ", " + labels[j]);
    // Directedness; a finite directed poset has a maximum.
    Point max = -1;
    for (int i = 0; i < n; ++i) {
      bool top = true;
      for (int j = 0; j < n && top; ++j)
        if (!rel.get(j, i)) top = false;
      if (top) {
        max = i;
        break;
      }
    }
    if (max < 0) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          bool bounded = false;
          for (int r = 0; r < n && !bounded; ++r)
            if (rel.get(i, r) && rel.get(j, r)) bounded = true;
          if (!bounded)
            throw NotDirected("points " + labels[i] + ", " + labels[j] + " have no upper bound");
        }
      throw NotDirected("directed but no maximum; finite posets cannot do this");
    }
    DirectedPoset P;
    P.labels_ = std::move(labels);
    P.leq_ = std::move(rel);
    P.max_ = max;
    return P;
  }

  std::vector<std::string> labels_;
  Relation leq_;
  Point max_ = -1;
};

}  // namespace sepsys
