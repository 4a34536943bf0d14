"""C4 censuses, codegree pair classes, and the defect Cauchy-Schwarz step.

The quadrilateral count C4 = sum over left pairs of C(codegree, 2) is the
second-moment statistic behind all of the irregularity detection: dense or
irregular pairs carry measurably more C4 mass than a random pair of the
same density.  Left pairs split into typical / bad / heavy by codegree
thresholds (1+delta) q^2 |V| and 4 q^2 |V|, heavy taking precedence.
"""

from bijumble.graphs import complete_bipartite, perfect_matching
from bijumble.quads import (
    c4_dense_irregular_audit,
    c4_partition_by_class,
    classify_pairs,
    count_c4,
    cs_defect_check,
)
from bijumble.experiments import gen_bipartite, gen_tripartite, plant_irregular_block, sparsify

print("C4(K_{4,5}) =", count_c4(complete_bipartite(4, 5)), "(= C(4,2) C(5,2))")
print("C4(matching) =", count_c4(perfect_matching(5)))

census = classify_pairs(complete_bipartite(3, 3), q=1 / 3, delta=0.5)
print("K_{3,3} at q=1/3: typical/bad/heavy =",
      (census.typical, census.bad, census.heavy))

parts = c4_partition_by_class(complete_bipartite(3, 3), q=1 / 3, delta=0.5)
print("its C4 mass sits on heavy pairs:", parts.through_heavy, "of", parts.total)

# The defect Cauchy-Schwarz inequality, checked on a concrete list: with
# half the values averaging 1.5x the mean, the sum of squares beats the
# plain bound by the defect factor.  (1,1,3,3) attains equality.
res = cs_defect_check([1, 1, 3, 3], a=2, delta=0.5, mu=0.5)
print(f"defect CS: lhs = {res.lhs}, rhs = {res.rhs}, holds = {res.holds}")

# Audit: a random pair's C4 count tracks q^4 m^2 n^2 / 4 closely, while a
# planted-irregular pair strictly exceeds it.  The statement-scale
# hypotheses are astronomically out of reach, which strict mode reports
# honestly; relaxed mode checks the trend at user slack.
pr = gen_bipartite(400, 400, 0.3, seed=1)
relaxed = c4_dense_irregular_audit(pr, 0.35, mode="relaxed", dense_slack=0.1, seed=2)
print("random pair, relaxed dense audit:", relaxed.verdict,
      f"(ratio to q^4 m^2 n^2/4: {relaxed.parameters['ratio_to_base']:.4f})")

system = sparsify(gen_tripartite(64, 64, 64, 0.5, seed=4), 0.5, seed=5)
planted = plant_irregular_block(system, ("Y", "Z"), 0.5, 1.0, seed=6)
audit = c4_dense_irregular_audit(planted.pair("Y", "Z"), 0.25, mode="relaxed", seed=7)
print("planted pair audit branch:", audit.parameters["branch"],
      f"(ratio {audit.parameters['ratio_to_base']:.4f})")

strict = c4_dense_irregular_audit(pr, 1e-3, mode="strict", seed=8)
print("strict mode at desk scale:", strict.verdict)
