"""Sampled play: regret accounting survives bandit feedback.

Both players sample pure actions from their mixed strategies each round.
The learner's realized regret exceeds its full-information regret by at
most an Azuma-Hoeffding margin of order sqrt(T log(m/delta)), and the trap
schedule keeps a positive mean surplus under sampling.
"""

import numpy as np

import ftrl_exploit as fx

MP = fx.ZeroSumGame(np.array([[1.0, -1.0], [-1.0, 1.0]]))


def main():
    T, delta = 5000, 0.05
    sched = fx.Fixed(np.array([0.5, 0.5]))
    kernel = fx.entropic()
    margin = fx.azuma_margin(T, MP.m, delta)
    print(f"Azuma margin at T={T}, delta={delta}: {margin:.1f}\n")

    traj = fx.simulate(MP, kernel, 0.1, sched, T)
    sol = fx.solve_minimax(MP)
    print("=== 300 seeded runs: realized vs full-information regret ===")
    diffs, sandwich_fails, violations = [], 0, 0
    for seed in range(300):
        run = fx.simulate_bandit(MP, kernel, 0.1, sched, T, seed=seed,
                                 delta=delta, traj=traj)
        diffs.append(run.realized_regret - run.full_info_regret)
        violations += run.realized_regret > run.full_info_regret + margin
        sandwich_fails += not fx.bandit_reward_sandwich(run, sol.value)
    print(f"  mean regret excess {np.mean(diffs):7.2f}  (margin allows {margin:.1f})")
    print(f"  margin violations: {violations}/300   reward-sandwich failures: "
          f"{sandwich_fails}/300\n")

    print("=== the trap under sampling ===")
    trap = fx.build_trap(MP, sol)
    tsched = fx.Alternating(trap.x_prime, trap.x_double, final=trap.x_star)
    ttraj = fx.simulate(MP, kernel, 0.2, tsched, 1000)
    surpluses = [
        fx.simulate_bandit(MP, kernel, 0.2, tsched, 1000, seed=s, traj=ttraj)
        .total_realized
        for s in range(300)
    ]
    print(f"  full-information surplus: {ttraj.total_reward:8.3f}")
    print(f"  sampled-play surplus:     {np.mean(surpluses):8.3f} "
          f"+- {np.std(surpluses) / np.sqrt(300):.3f} (mean over 300 seeds)")
    print("\nExploitation persists in expectation beyond idealized feedback.")


if __name__ == "__main__":
    main()
