"""Double counting with switchings: enumerate a family, stratify it by a pair
statistic, and check that moves out of level L are exactly the moves into
level L-1.  The class-size ratio that drops out is what tail bounds on the
statistic are made of."""

from hypercouple import (
    Hypergraph,
    OrderedHypergraph,
    Params,
    backward_count,
    count_extensions,
    forward_count,
    switching_class_sizes,
)


def main():
    params = Params(5, 2, 2)
    base = OrderedHypergraph(5, 2)
    fam = count_extensions(base, params, list_completions=True)
    graphs = [Hypergraph(5, 2, tail) for tail in fam.completions]
    print(f"2-regular graphs on 5 vertices: {len(graphs)}")

    pair = (1, 2)
    level = {h: sum(1 for e in h.edge_set if 1 in e and 2 in e)
             for h in graphs}
    for lvl in sorted(set(level.values())):
        upper = [h for h, s in level.items() if s == lvl]
        lower = [h for h, s in level.items() if s == lvl - 1]
        f = sum(forward_count(h, base, "pair_degree", pair=pair)
                for h in upper)
        b = sum(backward_count(h, base, "pair_degree", pair=pair)
                for h in lower)
        print(f"  level {lvl}: {len(upper)} graphs, forward {f} == back {b}")

    cs = switching_class_sizes(base, 1, 2, "pair_degree", params)
    print(f"levels occupied: {sorted(cs.unordered_sizes)} "
          f"(interval: {cs.is_interval})")
    sizes = cs.unordered_sizes
    for lvl in sorted(sizes):
        if lvl - 1 in sizes:
            print(f"  |C_{lvl}| / |C_{lvl - 1}| = "
                  f"{sizes[lvl]}/{sizes[lvl - 1]} = "
                  f"{sizes[lvl] / sizes[lvl - 1]:.3f}")


if __name__ == "__main__":
    main()
