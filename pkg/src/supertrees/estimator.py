"""scikit-learn style wrappers: ``fit`` on a collection of trees, ``transform``
to the supertree's restrictions."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .masp import solve_masp
from .mcsp import solve_mcsp
from .trees import is_agreement_supertree, is_compatible_supertree, restrict, write_newick
from .validation import check_mode, check_trees


class _SupertreeEstimator(TransformerMixin, BaseEstimator):
    _solve = None
    _check = None

    def __init__(self, mode: str = "rooted"):
        self.mode = mode

    def fit(self, X, y=None):
        check_mode(self.mode)
        instance = check_trees(X, self.mode)
        result = type(self)._solve(instance)
        self.instance_ = instance
        self.size_ = result.size
        self.supertree_ = result.tree
        self.newick_ = result.newick
        self.stats_ = result.stats
        return self

    def _joint(self, X):
        """The fitted supertree and ``X`` re-parsed over one label universe."""
        if not hasattr(self, "newick_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit first")
        items = [X] if isinstance(X, str) and "\n" not in X.strip() else X
        others = check_trees(items, self.mode).trees
        joint = check_trees([self.newick_, *others], self.mode)
        return joint.trees[0], joint.trees[1:]

    def transform(self, X):
        """Newick of the supertree restricted to each tree's labels."""
        sup, trees = self._joint(X)
        return [write_newick(restrict(sup, t.leafset)) for t in trees]

    def score(self, X, y=None):
        """Fraction of trees in ``X`` that the supertree agrees with (or is compatible with)."""
        sup, trees = self._joint(X)
        check = type(self)._check
        return sum(check(sup, [t]) for t in trees) / len(trees)


class MaximumAgreementSupertree(_SupertreeEstimator):
    """Largest tree whose restriction to every input tree's labels equals it."""

    _solve = staticmethod(solve_masp)
    _check = staticmethod(is_agreement_supertree)


class MaximumCompatibleSupertree(_SupertreeEstimator):
    """Largest tree whose restriction to every input tree's labels refines it."""

    _solve = staticmethod(solve_mcsp)
    _check = staticmethod(is_compatible_supertree)
