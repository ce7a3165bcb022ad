#include "amd/solver_rand.hpp"

#include "amd/errors.hpp"

namespace amd {

RandSolveResult solve_rand(const Setting& s, const Objective& obj,
                           Concept sc) {
  const LinearProgram lp = build_lp(s, obj, sc);
  SimplexResult opt = solve_lp(lp);

  RandSolveResult res;
  res.value = std::move(opt.value);
  res.mechanism.num_outcomes = s.num_outcomes();
  res.mechanism.dist = std::move(opt.solution);
  return res;
}

RandDecision decide_rand(const Setting& s, const Objective& obj,
                         Concept sc) {
  if (!obj.goal) throw InputError("decision requires a goal in the objective");
  RandSolveResult opt = solve_rand(s, obj, sc);
  RandDecision dec;
  dec.attained = opt.value >= *obj.goal;
  dec.mechanism = std::move(opt.mechanism);
  dec.value = std::move(opt.value);
  return dec;
}

}  // namespace amd
