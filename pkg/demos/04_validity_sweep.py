"""Sweep c for FCM and PCM and compare the validity indices.

For FCM the partition coefficient lies in [1/c, 1].  Typicalities carry no
sum-to-one constraint, so PCM rows are flagged "unnormalized": their PC can
exceed one and is not comparable with the FCM value.
"""
from softclust import RunConfig, generate, sweep_c

for name in ("two_separate", "three_close", "five_clusters"):
    ld = generate(name, seed=2)
    for alg in ("fcm", "pcm"):
        rep = sweep_c(ld.data, alg, (2, 7), RunConfig(c=2, seed=2))
        print(f"== {name} / {alg}  best: {rep.best()}")
        print(rep.format_table())
        print()
