"""Planarity of small graphs through the embedding class in degree two.

K4 draws in the plane, K5 and K3,3 do not.  For each graph the obstruction is
computed twice, from the moment-curve drawing and from the Smith class of the
deleted product; the crossing count of the drawing has the parity predicted
by the classical Hanani-Tutte argument.
"""
from smithvk import complete_bipartite, complete_graph, embedding_class_report
from smithvk.embedding import crossing_parity


def main() -> None:
    for K in (complete_graph(4), complete_graph(5), complete_bipartite(3, 3)):
        rep = embedding_class_report(K, 2)
        crossings = crossing_parity(K)
        verdict = "obstructed" if not rep.vanishes else "no obstruction"
        print(f"{K.name:5} {verdict:15} crossings={crossings} smith agrees={rep.agrees_with_smith}")
        if rep.torsion_certificate is not None:
            cert = rep.torsion_certificate
            print(f"      certificate: modulus {cert.modulus}, value {cert.value}, support {len(cert.chain)}")


if __name__ == "__main__":
    main()
