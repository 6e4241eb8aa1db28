from __future__ import annotations

from dataclasses import dataclass, field


class InfeasibleInputError(ValueError):
    """Input the solvers refuse, e.g. an unrooted tree with fewer than three leaves."""


@dataclass
class SupertreeResult:
    """Optimal size, a witness tree and solver statistics."""

    size: int
    tree: object
    stats: dict = field(default_factory=dict)

    @property
    def newick(self) -> str:
        from .trees import write_newick

        return write_newick(self.tree)


def check_solvable(instance, rooted: bool) -> None:
    if instance.rooted != rooted:
        want = "rooted" if rooted else "unrooted"
        raise InfeasibleInputError(f"expected {want} input trees")
    if not rooted:
        for i, t in enumerate(instance.trees):
            if t.n_leaves < 3:
                raise InfeasibleInputError(
                    f"unrooted input tree {i + 1} has {t.n_leaves} leaves; at least 3 are required"
                )
