"""Embed the binomial model: draw B ~ Bin(C(n,k), p) and reuse the coupled
trace's accepted proposals as the binomial graph whenever B fits under the
accepted count; otherwise fall back to an independent draw."""

from hypercouple import (
    CouplingConfig,
    Params,
    RngStream,
    choose_epsilon,
    default_gnp_probability,
    run_coupling_gnp,
)

TRACES = 3_000


def main():
    params = Params(6, 3, 2)
    cfg = CouplingConfig(params, gamma=0.75,
                         epsilon=choose_epsilon(params, 0.75))

    # the default density (1-2*gamma)d/C(n-1,k-1) only makes sense for
    # gamma < 1/2; at this toy scale we pass p explicitly
    print(f"default p at gamma=0.4 would be "
          f"{default_gnp_probability(params, 0.4):.4f}")
    p = 0.08

    edge_counts = []
    fallbacks = contained = 0
    for i in range(TRACES):
        tr = run_coupling_gnp(cfg, RngStream(11, (i,)), p=p)
        edge_counts.append(tr.edge_count)
        fallbacks += tr.independent_fallback
        contained += tr.contained
    mean = sum(edge_counts) / TRACES
    print(f"p={p}: mean edges {mean:.3f} "
          f"(Bin mean {p * params.complete_count:.2f})")
    print(f"independent fallback used: {fallbacks}/{TRACES}")
    print(f"binomial graph inside the regular one: {contained}/{TRACES}")


if __name__ == "__main__":
    main()
