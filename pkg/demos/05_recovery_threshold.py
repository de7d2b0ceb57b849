"""Exact rank analysis: where linear decoding of honest outputs becomes possible.

The decodability question is linear algebra: unknown coefficient blocks (one
per version tuple) plus the honest outputs, tied together by evaluation rows,
cross-tuple agreement rows, and the output tie. The honest outputs are unique
exactly when dropping their columns costs the full output rank.
"""

from shardlab import (
    DEFAULT_MODULUS,
    PrimeField,
    build_system,
    empirical_threshold,
    known_behavior_upper_bound,
    proof_params,
    recovery_threshold,
    unique_decodability,
)

field = PrimeField(DEFAULT_MODULUS)
v, beta_prime, d, K, beta = 2, 1, 2, 3, 1

n_star = recovery_threshold(v, beta_prime, d, K, beta)
print(f"parameters: v={v}, captured producers={beta_prime}, d={d}, K={K}, beta={beta}")
print(f"recovery threshold: {n_star} nodes")
print(f"upper bound with known behavior: {known_behavior_upper_bound(v, beta_prime, d, K, beta)} nodes\n")

print("--- the system one node below the threshold ---")
params = proof_params(v, beta_prime, d, K, beta, n_star - 1, field)
sys_m = build_system(params)
print(f"partition of retained evaluation points: {params.cell_sizes}")
print(f"A: {sys_m.A.nrows}x{sys_m.A.ncols} (evaluations)   "
      f"B: {sys_m.B.nrows}x{sys_m.B.ncols} (honest-point agreement)")
print(f"C: {sys_m.C.nrows}x{sys_m.C.ncols} (shared-version agreement)   "
      f"D: {sys_m.D.nrows}x{sys_m.D.ncols} (full system)")
report = unique_decodability(sys_m, K, beta_prime)
print(f"rank(D) = {report.rank_D}, rank without output columns = "
      f"{report.rank_D_without_Z_columns}, outputs unique: {report.unique_Z}")
zeta = report.zeta_block(sys_m.z_width)
print(f"witness output block (nonzero => two explanations of the same broadcasts): {zeta}\n")

print("--- sweep across N ---")
print(f"{'N':>3}  {'cells':>7}  {'rank D':>6}  {'reduced':>7}  verdict")
for row in empirical_threshold(v, beta_prime, d, K, beta, range(6, 13), field):
    if row.unique_Z is None:
        print(f"{row.N:>3}  {'-':>7}  {'-':>6}  {'-':>7}  {row.note}")
    else:
        cells = "|".join(map(str, row.partition_sizes))
        verdict = "decodable" if row.unique_Z else "ambiguous"
        print(f"{row.N:>3}  {cells:>7}  {row.rank_D:>6}  {row.rank_D_reduced:>7}  {verdict}")

print("\n--- the bound collapses honest tolerance when shards scale with nodes ---")
for K_big in (4, 8, 16, 32):
    bound = recovery_threshold(2, K_big // 2, 2, K_big, K_big)
    print(f"K={K_big:3d}, half the shards captured: need N >= {bound}")
