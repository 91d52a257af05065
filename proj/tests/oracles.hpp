#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "random_docs.hpp"
#include "support.hpp"

namespace gridspec::testing {

/// Linear scan for the first `true`; 1-based, nullopt when absent.
inline std::optional<long> scan_for_true(const std::vector<bool>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) return static_cast<long>(i) + 1;
  return std::nullopt;
}

/// Every index tuple of a random table, first dimension outermost.
inline std::vector<std::vector<long>> all_indices(const RandomDoc& d, const RandomTable& t) {
  std::vector<std::vector<long>> out{{}};
  for (const auto& dim : t.dims) {
    const auto& b = d.bound(dim);
    std::vector<std::vector<long>> next;
    for (const auto& prefix : out)
      for (long v = b.low; v <= b.high; ++v) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

inline std::string cell_text(const std::string& table, const std::vector<long>& idx) {
  std::string s = table + "[";
  for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + std::to_string(idx[k]);
  return s + "]";
}

/// Compares the analyzer's elaboration of `d` against a naive scan over
/// every (rule, cell) pair. Returns a description of the first disagreement.
inline std::optional<std::string> elaboration_disagreement(const RandomDoc& d) {
  const std::string text = render(element_texts(d));
  auto parsed = parse_document(text);
  if (!parsed.ok()) return "parse failed:\n" + text;
  const Analysis a = analyze(parsed.document);

  std::set<std::string> uncovered, overlapping;
  for (const auto& diag : a.diagnostics) {
    if (diag.code == "UncoveredCell") uncovered.insert(diag.message.substr(diag.message.rfind(' ') + 1));
    if (diag.code == "OverlappingRules") overlapping.insert(diag.message.substr(0, diag.message.find(' ')));
  }

  std::set<std::string> want_uncovered, want_overlapping;
  std::size_t equation_base = 0;
  for (const auto& t : d.tables) {
    for (const auto& idx : all_indices(d, t)) {
      const CellId id{t.name, idx};
      if (t.rules.empty()) {
        if (!a.plan.inputs.count(id)) return cell_text(t.name, idx) + " should be an input cell\n" + text;
        continue;
      }
      std::vector<std::size_t> hits;
      for (std::size_t r = 0; r < t.rules.size(); ++r) {
        bool ok = true;
        for (std::size_t k = 0; k < idx.size(); ++k) ok = ok && pattern_accepts(t.rules[r].patterns[k], idx[k]);
        if (ok) hits.push_back(r);
      }
      if (hits.empty()) {
        want_uncovered.insert(cell_text(t.name, idx));
      } else if (hits.size() > 1) {
        want_overlapping.insert(cell_text(t.name, idx));
      } else {
        auto it = a.plan.rules.find(id);
        if (it == a.plan.rules.end()) return "no rule recorded for " + cell_text(t.name, idx) + "\n" + text;
        if (it->second.equation != equation_base + hits[0])
          return "wrong rule for " + cell_text(t.name, idx) + "\n" + text;
      }
    }
    equation_base += t.rules.size();
  }
  if (uncovered != want_uncovered) return "UncoveredCell verdicts differ\n" + text;
  if (overlapping != want_overlapping) return "OverlappingRules verdicts differ\n" + text;
  if (a.ok() != (want_uncovered.empty() && want_overlapping.empty())) return "overall verdict differs\n" + text;
  return std::nullopt;
}

/// Loans configuration for the fixture C model.
struct LoanConfig {
  std::vector<std::optional<long>> want;  // 12 periods, nullopt = unbound
  std::vector<bool> has_ceiling;          // 4 loans
  std::vector<long> ceiling;
  std::vector<long> initial_loan;
  long initial_cash = 100;
  long expenses = 5;

  [[nodiscard]] std::string to_csv() const {
    std::string s = "initial_cash," + std::to_string(initial_cash) + "\n";
    for (long t = 1; t <= 12; ++t) s += "expenses_during_period," + std::to_string(t) + "," + std::to_string(expenses) + "\n";
    for (std::size_t t = 0; t < want.size(); ++t)
      if (want[t]) s += "want_to_borrow_during_period," + std::to_string(t + 1) + "," + std::to_string(*want[t]) + "\n";
    for (std::size_t l = 0; l < has_ceiling.size(); ++l) {
      const std::string i = std::to_string(l + 1);
      s += "has_ceiling," + i + "," + (has_ceiling[l] ? "true" : "false") + "\n";
      s += "ceiling," + i + "," + std::to_string(ceiling[l]) + "\n";
      s += "initial_loan," + i + "," + std::to_string(initial_loan[l]) + "\n";
    }
    return s;
  }
};

/// Direct simulation of the loans model: per period, the first loan whose
/// balance plus the wanted amount stays under its ceiling lends everything.
struct LoanTrace {
  std::vector<std::optional<long>> first;
  std::vector<std::vector<long>> lent;  // [l][t]
  std::vector<long> end_cash;
};

inline LoanTrace simulate_loans(const LoanConfig& c) {
  const std::size_t loans = c.ceiling.size();
  LoanTrace tr;
  tr.lent.assign(loans, std::vector<long>(c.want.size(), 0));
  std::vector<long> balance = c.initial_loan;
  long cash = c.initial_cash;
  for (std::size_t t = 0; t < c.want.size(); ++t) {
    const long w = c.want[t].value_or(0);
    std::optional<long> pick;
    for (std::size_t l = 0; l < loans && !pick; ++l)
      if (!c.has_ceiling[l] || w + balance[l] <= c.ceiling[l]) pick = static_cast<long>(l) + 1;
    tr.first.push_back(pick);
    long borrowed = 0;
    if (pick) {
      tr.lent[static_cast<std::size_t>(*pick - 1)][t] = w;
      balance[static_cast<std::size_t>(*pick - 1)] += w;
      borrowed = w;
    }
    cash = cash - c.expenses + borrowed;
    tr.end_cash.push_back(cash);
  }
  return tr;
}

inline LoanConfig fixture_loans() {
  LoanConfig c;
  for (long w : {15, 25, 45, 65, 85, 12, 12, 12, 12, 12}) c.want.emplace_back(w);
  c.want.emplace_back();
  c.want.emplace_back();
  c.has_ceiling = {true, true, true, true};
  c.ceiling = {15, 37, 57, 77};
  c.initial_loan = {0, 0, 0, 0};
  return c;
}

/// Searches integer ceilings in [0, limit] for the lexicographically
/// smallest vector reproducing `target` under the fixture wants.
inline std::optional<std::vector<long>> smallest_reproducing_ceilings(const std::vector<std::optional<long>>& target,
                                                                      long limit) {
  LoanConfig c = fixture_loans();
  // Each loan's balance history is fixed by the target, so each ceiling can
  // be screened independently and only the product needs a full check.
  std::vector<std::vector<long>> candidates(4);
  for (std::size_t l = 0; l < 4; ++l) {
    for (long ceil = 0; ceil <= limit; ++ceil) {
      long balance = 0;
      bool ok = true;
      for (std::size_t t = 0; t < target.size() && ok; ++t) {
        const long w = c.want[t].value_or(0);
        const bool fits = w + balance <= ceil;
        const long pick = target[t].value_or(5);
        if (static_cast<long>(l) + 1 < pick && fits) ok = false;
        if (static_cast<long>(l) + 1 == pick && !fits) ok = false;
        if (static_cast<long>(l) + 1 == pick) balance += w;
      }
      if (ok) candidates[l].push_back(ceil);
    }
    if (candidates[l].empty()) return std::nullopt;
  }
  for (long a : candidates[0])
    for (long b : candidates[1])
      for (long d : candidates[2])
        for (long e : candidates[3]) {
          c.ceiling = {a, b, d, e};
          if (simulate_loans(c).first == target) return c.ceiling;
        }
  return std::nullopt;
}

}  // namespace gridspec::testing
