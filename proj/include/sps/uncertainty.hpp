#pragma once

#include "sps/engine.hpp"

namespace sps {

// Pr(subject). The subject must denote a reified assertion, conditional
// assertion, rule, or derivation; throws Probability otherwise.
Term pr_term(const Term& subject, const Structure& s);

// Pr(d) = p, Pr(r) = q -> Pr(d ++ r) = p * q over derivations d and rules r.
Rule derivation_probability_rule();

// Pr(B | A) = pba, Pr(A) = pa, Pr(B) = pb -> Pr(A | B) = pba * pa / pb.
Rule bayes_rule();

// An ordinary schema rule whose assertions talk about Pr terms.
Rule probabilistic_rule(std::string id, std::vector<Declaration> declarations,
                        std::vector<Assertion> antecedent, Assertion consequent);

// Adds the current derivation cd (initially the empty derivation, Pr = 1)
// and extends every rule so that applying it also performs
// (cd, Pr(cd ++ r)) = (cd ++ r, Pr(cd) * Pr(r)), r being the declared rule id.
// Unannotated rules get Pr(r) = 1 unless `strict`, which throws Probability.
SPS attach_probability(const SPS& sps, bool strict);

// Pr(d) of a derivation given per-rule probabilities in `w`.
double derivation_probability(const std::vector<std::string>& rule_ids, const WorldState& w);

}  // namespace sps
