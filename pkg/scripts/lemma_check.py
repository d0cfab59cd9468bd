"""Compare the equal-ratio allocation against brute-force minmax completion.

Enumerates every complete-conflict instance in the oracle's guard range and
prints the match rate plus any instance where the two disagree.
"""

from collections import Counter

from localvoting.optimal import all_instances, lemma1_oracle


def main():
    gaps = Counter()
    for inst in all_instances():
        r = lemma1_oracle(inst)
        gaps[r.gap] += 1
        if r.gap:
            print(f"q={inst.queues} S={inst.slots_per_frame} optimal={r.optimal} "
                  f"equal-ratio={r.equal_ratio} via {r.allocations}")
    total = sum(gaps.values())
    print(f"{gaps[0]}/{total} instances match; gap histogram {dict(sorted(gaps.items()))}")


if __name__ == "__main__":
    main()
