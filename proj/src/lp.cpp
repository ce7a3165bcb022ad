#include "amd/lp.hpp"

#include <ostream>
#include <sstream>

namespace amd {

namespace {

void add_term(LinearConstraint& row, int var, const Rational& coeff) {
  row.coeffs[var] += coeff;
}

}  // namespace

LinearProgram build_lp(const Setting& s, const Objective& obj,
                       Concept sc) {
  LinearProgram lp;
  lp.num_outcomes = s.num_outcomes();
  const VectorIndex T = s.space.total();
  const int O = s.num_outcomes();
  lp.num_vars = static_cast<int>(T) * O;

  // Truthfulness rows. Self-report pairs are generated too: they are
  // trivially satisfied but belong to the constraint families whose
  // sizes the counting tests pin down.
  if (sc == Concept::ds) {
    for (int a = 0; a < s.num_agents(); ++a) {
      const TypeSpace others = s.space.opposing(a);
      for (VectorIndex w = 0; w < others.total(); ++w)
        for (int t = 0; t < s.num_types(a); ++t) {
          const VectorIndex vt = s.space.combine(a, t, w);
          for (int r = 0; r < s.num_types(a); ++r) {
            const VectorIndex vr = s.space.combine(a, r, w);
            LinearConstraint row;
            row.coeffs.assign(lp.num_vars, Rational(0));
            for (int k = 0; k < O; ++k) {
              const Rational& u = s.utility(a, t, k);
              if (u == 0) continue;
              add_term(row, lp.var(vt, k), u);
              add_term(row, lp.var(vr, k), -u);
            }
            lp.rows.push_back(std::move(row));
          }
        }
    }
  } else {
    for (int a = 0; a < s.num_agents(); ++a) {
      const TypeSpace others = s.space.opposing(a);
      for (int t = 0; t < s.num_types(a); ++t) {
        const std::vector<Rational> cond = conditional_other_types(s, a, t);
        for (int r = 0; r < s.num_types(a); ++r) {
          LinearConstraint row;
          row.coeffs.assign(lp.num_vars, Rational(0));
          for (VectorIndex w = 0; w < others.total(); ++w) {
            if (cond[w] == 0) continue;
            const VectorIndex vt = s.space.combine(a, t, w);
            const VectorIndex vr = s.space.combine(a, r, w);
            for (int k = 0; k < O; ++k) {
              const Rational u = cond[w] * s.utility(a, t, k);
              if (u == 0) continue;
              add_term(row, lp.var(vt, k), u);
              add_term(row, lp.var(vr, k), -u);
            }
          }
          lp.rows.push_back(std::move(row));
        }
      }
    }
  }
  lp.ic_row_count = lp.rows.size();

  // One distribution per reported vector.
  for (VectorIndex v = 0; v < T; ++v) {
    LinearConstraint row;
    row.rel = Relation::eq;
    row.rhs = 1;
    row.coeffs.assign(lp.num_vars, Rational(0));
    for (int k = 0; k < O; ++k) row.coeffs[lp.var(v, k)] = 1;
    lp.rows.push_back(std::move(row));
  }
  lp.simplex_row_count = T;

  lp.objective.assign(lp.num_vars, Rational(0));
  for (VectorIndex v = 0; v < T; ++v) {
    const Rational mass = s.mass(v);
    if (mass == 0) continue;
    for (int k = 0; k < O; ++k)
      lp.objective[lp.var(v, k)] = mass * objective_value(s, obj, v, k);
  }
  return lp;
}

namespace {

std::string var_name(VectorIndex v, int k) {
  return "p" + std::to_string(v) + "_" + std::to_string(k);
}

void write_terms(std::ostream& out, const std::vector<Rational>& coeffs,
                 int num_outcomes) {
  bool first = true;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0) continue;
    const Rational& c = coeffs[j];
    if (first) {
      if (c < 0) out << "- ";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    const Rational mag = abs(c);
    if (mag != 1) out << to_string(mag) << " ";
    out << var_name(static_cast<VectorIndex>(j) / num_outcomes,
                    static_cast<int>(j) % num_outcomes);
  }
  if (first) out << "0 " << var_name(0, 0);
}

}  // namespace

void write_lp_text(std::ostream& out, const LinearProgram& lp,
                   const Setting& s) {
  out << "\\ mechanism design LP: " << lp.num_vars << " variables, "
      << lp.ic_row_count << " truthfulness rows, " << lp.simplex_row_count
      << " distribution rows\n";
  out << "\\ p{v}_{k} = probability of outcome k at reported type vector v\n";
  for (VectorIndex v = 0; v < s.space.total(); ++v) {
    out << "\\ vector " << v << " = (";
    const std::vector<int> types = s.space.decode(v);
    for (int a = 0; a < s.num_agents(); ++a)
      out << (a ? "," : "") << s.type_names[a][types[a]];
    out << ")\n";
  }
  for (int k = 0; k < s.num_outcomes(); ++k)
    out << "\\ outcome " << k << " = " << s.outcome_names[k] << "\n";
  out << "Maximize\n obj: ";
  write_terms(out, lp.objective, lp.num_outcomes);
  out << "\nSubject To\n";
  std::size_t emitted = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    bool all_zero = true;
    for (const auto& c : row.coeffs)
      if (c != 0) {
        all_zero = false;
        break;
      }
    if (all_zero && row.rhs == 0) continue;  // self-report rows
    out << " " << (i < lp.ic_row_count ? "ic" : "sum") << i << ": ";
    write_terms(out, row.coeffs, lp.num_outcomes);
    out << (row.rel == Relation::eq ? " = " : " >= ") << to_string(row.rhs)
        << "\n";
    ++emitted;
  }
  out << "\\ " << lp.rows.size() - emitted
      << " trivially satisfied self-report rows omitted\n";
  out << "Bounds\n";
  out << "\\ all variables default to >= 0\n";
  out << "End\n";
}

std::string lp_text(const LinearProgram& lp, const Setting& s) {
  std::ostringstream out;
  write_lp_text(out, lp, s);
  return out.str();
}

}  // namespace amd
