"""Compare the four allocation policies on the nominal scenario.

Paired seeds: every policy replays the same worlds, so differences are
down to the decisions, not the dice.
"""

from concurrent.futures import ProcessPoolExecutor

from hubfleet import ScenarioConfig, run_trial

TRIALS = 30
POLICIES = ("ibr", "hungarian", "edd", "random")


def one(args):
    seed, policy = args
    return policy, run_trial(ScenarioConfig(seed=seed), policy)


def main():
    jobs = [(seed, policy) for policy in POLICIES for seed in range(TRIALS)]
    results = {}
    with ProcessPoolExecutor() as pool:
        for policy, record in pool.map(one, jobs, chunksize=8):
            results.setdefault(policy, []).append(record)

    print(f"nominal scenario, {TRIALS} paired trials per policy\n")
    print(f"{'policy':12s} {'frac late':>10s} {'completed':>10s} {'plan ms':>9s}")
    for policy in POLICIES:
        recs = results[policy]
        late = sum(r.fraction_late for r in recs) / len(recs)
        done = sum(r.n_completed for r in recs) / len(recs)
        ms = 1e3 * sum(r.mean_planning_time_s for r in recs) / len(recs)
        print(f"{policy:12s} {late:10.4f} {done:10.1f} {ms:9.3f}")


if __name__ == "__main__":
    main()
