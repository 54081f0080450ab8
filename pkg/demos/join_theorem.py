"""Lifting a planarity obstruction to the join with three points.

For K in {K5, K3,3} the obstruction of K in degree 2 is lifted to one for
[3]*K in degree 4 by the prism construction, and the evaluation trace is
compared with a direct Smith computation on the join.  K4 has no
obstruction to lift.
"""
from smithvk import complete_bipartite, complete_graph, verify_join_theorem


def main() -> None:
    for K in (complete_graph(5), complete_bipartite(3, 3), complete_graph(4)):
        for mode in ("Z", "Z2"):
            rep = verify_join_theorem(K, 2, mode)
            if not rep.hypothesis:
                print(f"{K.name:5} {mode:2}: nothing to lift")
                continue
            print(f"{K.name:5} {mode:2}: direct {rep.direct_nonzero}, certificate {rep.certificate_nonzero}")
            for step, value in rep.trace:
                print(f"        {step} = {value}")


if __name__ == "__main__":
    main()
