"""Smith classes of the antipodal sphere, and the projective space underneath.

Two cells per dimension, swapped by the antipodal map.  Every special class up
to the top degree survives, so the index is one more than the dimension.  The
quotient is the usual minimal cell structure of projective space, with a top
boundary coefficient alternating between 0 and 2.
"""
from smithvk import smith_classes_and_index, sphere_z2_complex
from smithvk.smith import quotient_of


def main() -> None:
    for n in range(1, 5):
        S = sphere_z2_complex(n)
        report = smith_classes_and_index(S)
        flags = "".join("x" if not c.vanishes else "." for c in report.classes)
        print(f"S^{n}: classes {flags}  index {report.index}")
    Q = quotient_of(sphere_z2_complex(4))
    for i in range(1, 5):
        (cell,) = Q.cells(i)
        print(f"  quotient boundary of {cell}: {Q.boundary_of(cell) or 0}")


if __name__ == "__main__":
    main()
