#include "amd/simplex.hpp"

#include <stdexcept>

namespace amd {

namespace {

// Dense two-phase tableau over exact rationals. Entering variable by
// Dantzig's rule, switching permanently to Bland's rule after a stretch
// of degenerate pivots so termination is guaranteed.
class Tableau {
 public:
  explicit Tableau(int num_structural) : n_struct_(num_structural) {}

  // Rows are added with rhs >= 0.
  void add_leq(std::vector<Rational> coeffs, Rational rhs) {
    add_row(std::move(coeffs), std::move(rhs), RowKind::leq);
  }
  void add_geq(std::vector<Rational> coeffs, Rational rhs) {
    add_row(std::move(coeffs), std::move(rhs), RowKind::geq);
  }
  void add_eq(std::vector<Rational> coeffs, Rational rhs) {
    add_row(std::move(coeffs), std::move(rhs), RowKind::eq);
  }

  SimplexResult maximize(const std::vector<Rational>& objective) {
    build();
    if (num_artificial_ > 0) phase1();
    phase2(objective);

    SimplexResult res;
    res.solution.assign(n_struct_, Rational(0));
    for (std::size_t r = 0; r < tab_.size(); ++r)
      if (basis_[r] < n_struct_) res.solution[basis_[r]] = rhs_col(r);
    res.value = 0;
    for (int j = 0; j < n_struct_; ++j)
      if (res.solution[j] != 0) res.value += objective[j] * res.solution[j];
    return res;
  }

 private:
  enum class RowKind { leq, geq, eq };

  void add_row(std::vector<Rational> coeffs, Rational rhs, RowKind kind) {
    rows_.push_back(std::move(coeffs));
    rhs_.push_back(std::move(rhs));
    kind_.push_back(kind);
  }

  int cols() const { return n_struct_ + num_slack_ + num_artificial_ + 1; }
  Rational& rhs_col(std::size_t r) { return tab_[r][cols() - 1]; }

  void build() {
    num_slack_ = 0;
    num_artificial_ = 0;
    for (auto k : kind_) {
      if (k != RowKind::eq) ++num_slack_;  // slack or surplus
      if (k != RowKind::leq) ++num_artificial_;
    }
    const std::size_t m = rows_.size();
    tab_.assign(m, std::vector<Rational>(cols(), Rational(0)));
    basis_.assign(m, -1);
    int next_slack = n_struct_;
    int next_art = n_struct_ + num_slack_;
    for (std::size_t r = 0; r < m; ++r) {
      for (int j = 0; j < n_struct_; ++j) tab_[r][j] = rows_[r][j];
      rhs_col(r) = rhs_[r];
      switch (kind_[r]) {
        case RowKind::leq:
          tab_[r][next_slack] = 1;
          basis_[r] = next_slack++;
          break;
        case RowKind::geq:
          tab_[r][next_slack++] = -1;  // surplus
          tab_[r][next_art] = 1;
          basis_[r] = next_art++;
          break;
        case RowKind::eq:
          tab_[r][next_art] = 1;
          basis_[r] = next_art++;
          break;
      }
    }
    allowed_.assign(cols() - 1, true);
  }

  void phase1() {
    // Maximize minus the sum of artificials; feasible iff optimum is 0.
    std::vector<Rational> z(cols(), Rational(0));
    for (int j = n_struct_ + num_slack_; j < cols() - 1; ++j) z[j] = 1;
    // Price out the basic artificials.
    for (std::size_t r = 0; r < tab_.size(); ++r)
      if (basis_[r] >= n_struct_ + num_slack_)
        for (int j = 0; j < cols(); ++j)
          if (tab_[r][j] != 0) z[j] -= tab_[r][j];
    pivot_until_optimal(z);
    if (z[cols() - 1] != 0) throw std::logic_error("simplex: LP is infeasible");
    // Remove remaining degenerate artificials from the basis; a row with
    // no eligible pivot is redundant and stays parked at zero.
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (basis_[r] < n_struct_ + num_slack_) continue;
      for (int j = 0; j < n_struct_ + num_slack_; ++j)
        if (tab_[r][j] != 0) {
          pivot(r, j);
          break;
        }
    }
    for (int j = n_struct_ + num_slack_; j < cols() - 1; ++j)
      allowed_[j] = false;
  }

  void phase2(const std::vector<Rational>& objective) {
    std::vector<Rational> z(cols(), Rational(0));
    for (int j = 0; j < n_struct_; ++j) z[j] = -objective[j];
    for (std::size_t r = 0; r < tab_.size(); ++r)
      if (z[basis_[r]] != 0) {
        const Rational f = z[basis_[r]];
        for (int j = 0; j < cols(); ++j)
          if (tab_[r][j] != 0) z[j] -= f * tab_[r][j];
      }
    pivot_until_optimal(z);
  }

  void pivot_until_optimal(std::vector<Rational>& z) {
    z_ = &z;
    bool bland = false;
    int stalled = 0;
    const int stall_limit = 4 * (static_cast<int>(tab_.size()) + cols());
    while (true) {
      const int enter = bland ? pick_bland(z) : pick_dantzig(z);
      if (enter < 0) break;
      const int leave = ratio_test(enter);
      if (leave < 0) throw std::logic_error("simplex: LP is unbounded");
      const bool degenerate = rhs_col(leave) == 0;
      pivot(leave, enter);
      if (degenerate) {
        if (++stalled > stall_limit) bland = true;
      } else {
        stalled = 0;
      }
    }
    z_ = nullptr;
  }

  int pick_dantzig(const std::vector<Rational>& z) const {
    int best = -1;
    for (int j = 0; j < cols() - 1; ++j)
      if (allowed_[j] && z[j] < 0 && (best < 0 || z[j] < z[best])) best = j;
    return best;
  }

  int pick_bland(const std::vector<Rational>& z) const {
    for (int j = 0; j < cols() - 1; ++j)
      if (allowed_[j] && z[j] < 0) return j;
    return -1;
  }

  int ratio_test(int enter) {
    int leave = -1;
    Rational best;
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (tab_[r][enter] <= 0) continue;
      Rational ratio = rhs_col(r) / tab_[r][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && basis_[r] < basis_[leave])) {
        leave = static_cast<int>(r);
        best = ratio;
      }
    }
    return leave;
  }

  void pivot(std::size_t r, int enter) {
    const Rational inv = 1 / tab_[r][enter];
    if (inv != 1)
      for (int j = 0; j < cols(); ++j)
        if (tab_[r][j] != 0) tab_[r][j] *= inv;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (i == r || tab_[i][enter] == 0) continue;
      const Rational f = tab_[i][enter];
      for (int j = 0; j < cols(); ++j)
        if (tab_[r][j] != 0) tab_[i][j] -= f * tab_[r][j];
    }
    if (z_ != nullptr && (*z_)[enter] != 0) {
      const Rational f = (*z_)[enter];
      for (int j = 0; j < cols(); ++j)
        if (tab_[r][j] != 0) (*z_)[j] -= f * tab_[r][j];
    }
    basis_[r] = enter;
  }

  int n_struct_;
  int num_slack_ = 0;
  int num_artificial_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<RowKind> kind_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
  std::vector<Rational>* z_ = nullptr;
};

}  // namespace

SimplexResult solve_lp(const LinearProgram& lp) {
  Tableau tab(lp.num_vars);
  for (const auto& row : lp.rows) {
    bool all_zero = true;
    for (const auto& c : row.coeffs)
      if (c != 0) {
        all_zero = false;
        break;
      }
    if (all_zero && row.rhs == 0) continue;  // trivial self-report rows
    if (all_zero)
      throw std::logic_error("simplex: contradictory constant row");

    std::vector<Rational> coeffs = row.coeffs;
    Rational rhs = row.rhs;
    enum { leq, geq, eq } rel = row.rel == Relation::eq ? eq : geq;
    if (rhs < 0) {  // normalize to a nonnegative right-hand side
      for (auto& c : coeffs) c = -c;
      rhs = -rhs;
      if (rel == geq) rel = leq;
    }
    if (rel == geq && rhs == 0) {  // flip into a slack-only row
      for (auto& c : coeffs) c = -c;
      rel = leq;
    }
    switch (rel) {
      case eq:
        tab.add_eq(std::move(coeffs), std::move(rhs));
        break;
      case geq:
        tab.add_geq(std::move(coeffs), std::move(rhs));
        break;
      case leq:
        tab.add_leq(std::move(coeffs), std::move(rhs));
        break;
    }
  }
  return tab.maximize(lp.objective);
}

}  // namespace amd
