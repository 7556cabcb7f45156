#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sppic/edge_vector.hpp"
#include "sppic/error.hpp"

namespace sppic {

/// A choice function C on the integer box of one vertex star. Positions are
/// star positions (edges of the star in increasing edge order). Implementations
/// must return C(z) <= z and be safe for concurrent calls.
class ChoiceFunction {
 public:
  virtual ~ChoiceFunction() = default;
  virtual EdgeVector choose(std::span<const int> z) const = 0;
  /// CF spec document, naming star positions by `star_ids`.
  virtual nlohmann::json to_json(std::span<const std::string> star_ids) const = 0;
};

/// Greedy quota rule over a linear order: keep whole prefix groups while the
/// running total fits the quota, cut the next edge at the remaining quota.
class LinearOrderQuotaCF final : public ChoiceFunction {
 public:
  LinearOrderQuotaCF(std::vector<std::size_t> order, int quota)
      : order_(std::move(order)), quota_(quota) {
    if (quota_ < 0) throw InputError("quota must be nonnegative");
    std::vector<std::size_t> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i) throw InputError("linear order is not a permutation of the star");
  }

  EdgeVector choose(std::span<const int> z) const override {
    long size = 0;
    for (int v : z) size += v;
    EdgeVector out(std::vector<int>(z.begin(), z.end()));
    if (size <= quota_) return out;
    int room = quota_;
    for (std::size_t pos : order_) {
      int take = std::min(room, out[pos]);
      out[pos] = take;
      room -= take;
    }
    return out;
  }

  nlohmann::json to_json(std::span<const std::string> star_ids) const override {
    nlohmann::json order = nlohmann::json::array();
    for (std::size_t pos : order_) order.push_back(star_ids[pos]);
    return {{"type", "linear_order_quota"}, {"quota", quota_}, {"order", order}};
  }

  const std::vector<std::size_t>& order() const { return order_; }
  int quota() const { return quota_; }

 private:
  std::vector<std::size_t> order_;
  int quota_;
};

/// Explicit table over the whole box. Axioms are not assumed.
class TableCF final : public ChoiceFunction {
 public:
  TableCF(std::vector<int> caps, std::vector<EdgeVector> table)
      : box_(std::move(caps)), table_(std::move(table)) {
    if (table_.size() != box_.size())
      throw InputError("table choice function must cover every point of the box");
    box_.for_each([&](const EdgeVector& z) {
      const EdgeVector& c = table_[box_.index_of(z)];
      if (c.size() != z.size() || !c.dominated_by(z) ||
          std::any_of(c.begin(), c.end(), [](int v) { return v < 0; }))
        throw InputError("table choice function violates C(z) <= z");
      return true;
    });
  }

  EdgeVector choose(std::span<const int> z) const override {
    EdgeVector key(std::vector<int>(z.begin(), z.end()));
    if (!box_.contains(key)) throw InputError("vector outside the box of the table");
    return table_[box_.index_of(key)];
  }

  nlohmann::json to_json(std::span<const std::string> star_ids) const override {
    nlohmann::json entries = nlohmann::json::array();
    box_.for_each([&](const EdgeVector& z) {
      const EdgeVector& c = table_[box_.index_of(z)];
      nlohmann::json zj = nlohmann::json::object(), cj = nlohmann::json::object();
      for (std::size_t i = 0; i < z.size(); ++i) {
        zj[star_ids[i]] = z[i];
        cj[star_ids[i]] = c[i];
      }
      entries.push_back({{"z", zj}, {"c", cj}});
      return true;
    });
    return {{"type", "table"}, {"entries", entries}};
  }

 private:
  Box box_;
  std::vector<EdgeVector> table_;
};

/// Copy of another choice function acting on a relabelled star:
/// local position i corresponds to position `to_base[i]` of the base star.
class PermutedCF final : public ChoiceFunction {
 public:
  PermutedCF(std::shared_ptr<const ChoiceFunction> base, std::vector<std::size_t> to_base)
      : base_(std::move(base)), to_base_(std::move(to_base)) {}

  EdgeVector choose(std::span<const int> z) const override {
    std::vector<int> bz(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) bz[to_base_[i]] = z[i];
    EdgeVector r = base_->choose(bz);
    EdgeVector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = r[to_base_[i]];
    return out;
  }

  nlohmann::json to_json(std::span<const std::string> star_ids) const override {
    std::vector<std::string> base_ids(star_ids.size());
    for (std::size_t i = 0; i < star_ids.size(); ++i) base_ids[to_base_[i]] = star_ids[i];
    return base_->to_json(base_ids);
  }

 private:
  std::shared_ptr<const ChoiceFunction> base_;
  std::vector<std::size_t> to_base_;
};

/// Builds a choice function from its spec document.
inline std::shared_ptr<const ChoiceFunction> parse_choice_spec(
    const nlohmann::json& spec, std::span<const std::string> star_ids, std::span<const int> caps) {
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string())
    throw InputError("choice spec must be an object with a string 'type'");
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < star_ids.size(); ++i) pos.emplace(star_ids[i], i);
  auto local = [&](const nlohmann::json& id) {
    if (!id.is_string()) throw InputError("choice spec edge ids must be strings");
    auto it = pos.find(id.get<std::string>());
    if (it == pos.end())
      throw InputError("choice spec names edge '" + id.get<std::string>() +
                       "' outside the vertex star");
    return it->second;
  };
  const std::string type = spec["type"].get<std::string>();
  if (type == "linear_order_quota") {
    if (!spec.contains("quota") || !spec["quota"].is_number_integer())
      throw InputError("linear_order_quota needs an integer 'quota'");
    if (!spec.contains("order") || !spec["order"].is_array())
      throw InputError("linear_order_quota needs an 'order' array");
    std::vector<std::size_t> order;
    for (const auto& id : spec["order"]) order.push_back(local(id));
    if (order.size() != star_ids.size())
      throw InputError("linear order must list every edge of the star exactly once");
    return std::make_shared<LinearOrderQuotaCF>(std::move(order), spec["quota"].get<int>());
  }
  if (type == "table") {
    if (!spec.contains("entries") || !spec["entries"].is_array())
      throw InputError("table needs an 'entries' array");
    Box box(std::vector<int>(caps.begin(), caps.end()));
    std::vector<std::optional<EdgeVector>> table(box.size());
    auto read = [&](const nlohmann::json& obj) {
      if (!obj.is_object()) throw InputError("table vectors must be objects");
      EdgeVector v(star_ids.size());
      for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!it.value().is_number_integer()) throw InputError("table values must be integers");
        v[local(it.key())] = it.value().get<int>();
      }
      return v;
    };
    for (const auto& entry : spec["entries"]) {
      if (!entry.is_object() || !entry.contains("z") || !entry.contains("c"))
        throw InputError("table entries need 'z' and 'c'");
      EdgeVector z = read(entry["z"]);
      if (!box.contains(z)) throw InputError("table entry z lies outside the box");
      auto& slot = table[box.index_of(z)];
      if (slot) throw InputError("table lists the same z twice");
      slot = read(entry["c"]);
    }
    std::vector<EdgeVector> full;
    full.reserve(table.size());
    for (auto& t : table) {
      if (!t) throw InputError("table choice function is not total on the box");
      full.push_back(std::move(*t));
    }
    return std::make_shared<TableCF>(box.caps(), std::move(full));
  }
  throw InputError("unknown choice function type '" + type + "'");
}

/// A choice function bound to its vertex and star box.
class ChoiceOracle {
 public:
  ChoiceOracle(std::string vertex, std::vector<std::string> star_ids, std::vector<int> caps,
               std::shared_ptr<const ChoiceFunction> cf)
      : vertex_(std::move(vertex)), star_ids_(std::move(star_ids)), box_(std::move(caps)),
        cf_(std::move(cf)) {}

  const std::string& vertex() const { return vertex_; }
  const std::vector<std::string>& star_ids() const { return star_ids_; }
  const Box& box() const { return box_; }
  std::size_t degree() const { return star_ids_.size(); }
  const ChoiceFunction& function() const { return *cf_; }

  /// Unchecked evaluation.
  EdgeVector raw(const EdgeVector& z) const { return cf_->choose(z.span()); }

  void require_in_box(const EdgeVector& z) const {
    if (z.size() != degree())
      throw InputError("vector domain does not match the star of '" + vertex_ + "'");
    if (!box_.contains(z)) throw InputError("vector outside the box of '" + vertex_ + "'");
  }

 private:
  std::string vertex_;
  std::vector<std::string> star_ids_;
  Box box_;
  std::shared_ptr<const ChoiceFunction> cf_;
};

inline EdgeVector choose(const ChoiceOracle& cf, const EdgeVector& z) {
  cf.require_in_box(z);
  return cf.raw(z);
}

inline bool is_acceptable(const ChoiceOracle& cf, const EdgeVector& z) {
  return choose(cf, z) == z;
}

/// True iff z is preferred to z2, i.e. C(z v z2) = z.
inline bool prefers(const ChoiceOracle& cf, const EdgeVector& z, const EdgeVector& z2) {
  if (!is_acceptable(cf, z) || !is_acceptable(cf, z2))
    throw InputError("prefers: both vectors must be acceptable at '" + cf.vertex() + "'");
  if (z == z2) return false;
  return cf.raw(join(z, z2)) == z;
}

/// Unit-increment test: z(e) < b(e) and C(z + 1^e)(e) > z(e).
inline bool is_interesting_unchecked(const ChoiceOracle& cf, const EdgeVector& z, std::size_t e) {
  if (z[e] >= cf.box().caps()[e]) return false;
  EdgeVector up = z;
  ++up[e];
  return cf.raw(up)[e] > z[e];
}

inline bool is_interesting(const ChoiceOracle& cf, const EdgeVector& z, std::size_t e) {
  if (e >= cf.degree())
    throw InputError("edge position " + std::to_string(e) + " outside the star of '" +
                     cf.vertex() + "'");
  if (!is_acceptable(cf, z))
    throw InputError("is_interesting: vector must be acceptable at '" + cf.vertex() + "'");
  return is_interesting_unchecked(cf, z, e);
}

enum class Axiom { SUB, MON, CON, GL };

inline std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::SUB: return "SUB";
    case Axiom::MON: return "MON";
    case Axiom::CON: return "CON";
    case Axiom::GL: return "GL";
  }
  return "?";
}

inline Axiom parse_axiom(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), ::toupper);
  if (name == "SUB") return Axiom::SUB;
  if (name == "MON") return Axiom::MON;
  if (name == "CON") return Axiom::CON;
  if (name == "GL") return Axiom::GL;
  throw InputError("unknown axiom '" + name + "'");
}

/// Outcome of an exhaustive axiom check. When `holds` is false:
///   SUB/MON/CON: vectors = {z, z'} with z >= z';
///   GL: vectors = {z1, z2, z3}, edges = {a, c1, c2, c3}.
struct AxiomReport {
  Axiom axiom = Axiom::SUB;
  bool holds = true;
  std::vector<EdgeVector> vectors;
  std::vector<std::size_t> edges;
  unsigned long long checked = 0;
};

inline constexpr unsigned long long kDefaultAxiomBudget = 1'000'000;

namespace detail {

// Number of ordered pairs z >= z' in the box.
inline unsigned long long dominating_pairs(const Box& box, unsigned long long limit) {
  unsigned long long n = 1;
  for (int c : box.caps()) {
    unsigned long long f = (static_cast<unsigned long long>(c) + 1) * (c + 2) / 2;
    if (n > limit / f) return limit + 1;
    n *= f;
  }
  return n;
}

inline bool sub_violated(const EdgeVector& cz, const EdgeVector& zp, const EdgeVector& czp) {
  return !meet(cz, zp).dominated_by(czp);
}
inline bool mon_violated(const EdgeVector& cz, const EdgeVector& czp) {
  return cz.total() < czp.total();
}
inline bool con_violated(const EdgeVector& cz, const EdgeVector& zp, const EdgeVector& czp) {
  return cz.dominated_by(zp) && czp != cz;
}

// The edge c with C(z + 1^a) = z + 1^a - 1^c; c == a when the unit is rejected.
inline std::optional<std::size_t> unit_swap(const ChoiceOracle& cf, const EdgeVector& z,
                                            std::size_t a) {
  if (z[a] >= cf.box().caps()[a]) return std::nullopt;
  EdgeVector up = z;
  ++up[a];
  EdgeVector r = cf.raw(up);
  for (std::size_t c = 0; c < z.size(); ++c) {
    if (up[c] == 0) continue;
    EdgeVector expect = up;
    --expect[c];
    if (r == expect) return c;
  }
  return std::nullopt;
}

}  // namespace detail

/// Exhaustive check of one axiom over the star box. Refuses (BudgetExceeded)
/// when the number of vector pairs exceeds `budget`.
inline AxiomReport check_axiom(const ChoiceOracle& cf, Axiom axiom,
                               unsigned long long budget = kDefaultAxiomBudget) {
  AxiomReport report;
  report.axiom = axiom;
  const Box& box = cf.box();
  const unsigned long long points = box.size(budget);
  if (points > budget)
    throw BudgetExceeded("box of '" + cf.vertex() + "' exceeds the axiom budget");
  std::vector<EdgeVector> table(points);
  box.for_each([&](const EdgeVector& z) {
    table[box.index_of(z)] = cf.raw(z);
    return true;
  });

  if (axiom != Axiom::GL) {
    if (detail::dominating_pairs(box, budget) > budget)
      throw BudgetExceeded("pair count at '" + cf.vertex() + "' exceeds the axiom budget");
    box.for_each([&](const EdgeVector& z) {
      const EdgeVector& cz = table[box.index_of(z)];
      Box::for_each_below(z, [&](const EdgeVector& zp) {
        ++report.checked;
        const EdgeVector& czp = table[box.index_of(zp)];
        bool bad = false;
        switch (axiom) {
          case Axiom::SUB: bad = detail::sub_violated(cz, zp, czp); break;
          case Axiom::MON: bad = detail::mon_violated(cz, czp); break;
          case Axiom::CON: bad = detail::con_violated(cz, zp, czp); break;
          case Axiom::GL: break;
        }
        if (bad) {
          report.holds = false;
          report.vectors = {z, zp};
        }
        return report.holds;
      });
      return report.holds;
    });
    return report;
  }

  // (GL): scan acceptable vectors, the preference relation among them, and the
  // unit-increment rejections at every edge a.
  std::vector<EdgeVector> acceptable;
  box.for_each([&](const EdgeVector& z) {
    if (table[box.index_of(z)] == z) acceptable.push_back(z);
    return true;
  });
  const std::size_t n = acceptable.size();
  if (static_cast<unsigned long long>(n) * n > budget)
    throw BudgetExceeded("acceptable set at '" + cf.vertex() + "' too large for the GL check");
  // below[i][j]: acceptable[i] is less preferred than acceptable[j].
  std::vector<std::vector<char>> below(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      ++report.checked;
      below[i][j] = table[box.index_of(join(acceptable[i], acceptable[j]))] == acceptable[j];
    }
  for (std::size_t a = 0; a < cf.degree(); ++a) {
    std::vector<long> drop(n, -1);
    for (std::size_t i = 0; i < n; ++i)
      if (auto c = detail::unit_swap(cf, acceptable[i], a)) drop[i] = static_cast<long>(*c);
    for (std::size_t j = 0; j < n; ++j) {
      if (drop[j] < 0) continue;
      std::map<long, std::size_t> lower, upper;
      for (std::size_t i = 0; i < n; ++i) {
        if (drop[i] < 0 || drop[i] == drop[j]) continue;
        if (below[i][j]) lower.emplace(drop[i], i);
        if (below[j][i]) upper.emplace(drop[i], i);
      }
      for (const auto& [c, i] : lower) {
        auto k = upper.find(c);
        if (k == upper.end()) continue;
        report.holds = false;
        report.vectors = {acceptable[i], acceptable[j], acceptable[k->second]};
        report.edges = {a, static_cast<std::size_t>(c), static_cast<std::size_t>(drop[j]),
                        static_cast<std::size_t>(c)};
        return report;
      }
    }
  }
  return report;
}

/// Re-evaluates a failing report's witness; true iff it still shows a violation.
inline bool witness_violates(const ChoiceOracle& cf, const AxiomReport& r) {
  if (r.holds) return false;
  if (r.axiom != Axiom::GL) {
    if (r.vectors.size() != 2) return false;
    const EdgeVector &z = r.vectors[0], &zp = r.vectors[1];
    if (!zp.dominated_by(z)) return false;
    EdgeVector cz = choose(cf, z), czp = choose(cf, zp);
    switch (r.axiom) {
      case Axiom::SUB: return detail::sub_violated(cz, zp, czp);
      case Axiom::MON: return detail::mon_violated(cz, czp);
      case Axiom::CON: return detail::con_violated(cz, zp, czp);
      case Axiom::GL: break;
    }
    return false;
  }
  if (r.vectors.size() != 3 || r.edges.size() != 4) return false;
  for (const auto& z : r.vectors)
    if (!is_acceptable(cf, z)) return false;
  if (!prefers(cf, r.vectors[1], r.vectors[0]) || !prefers(cf, r.vectors[2], r.vectors[1]))
    return false;
  for (int i = 0; i < 3; ++i) {
    auto c = detail::unit_swap(cf, r.vectors[i], r.edges[0]);
    if (!c || *c != r.edges[i + 1]) return false;
  }
  return r.edges[1] == r.edges[3] && r.edges[1] != r.edges[2];
}

}  // namespace sppic
