"""Algebra norms, rational phase approximation, and additive structure search
on finite abelian groups.

Thin re-export of the compiled core; all results are plain dicts/lists with
exact rationals rendered as "p/q" strings.
"""

try:
    from bhlab._core import (  # type: ignore[attr-defined]
        CapError,
        InputError,
        algebra_norm,
        build_phi_star,
        coset_fit,
        detect_affine,
        dirichlet_approx,
        extract_maximal,
        find_invariant_subgroup,
        graph_norm_identity_check,
        indicator_norm,
        kappa_statistic,
        norm_profile,
        run_corpus,
        set_threads,
        threads,
        version,
    )
except ImportError:  # in-tree builds put _core next to the build directory
    from _core import (  # type: ignore[no-redef]
        CapError,
        InputError,
        algebra_norm,
        build_phi_star,
        coset_fit,
        detect_affine,
        dirichlet_approx,
        extract_maximal,
        find_invariant_subgroup,
        graph_norm_identity_check,
        indicator_norm,
        kappa_statistic,
        norm_profile,
        run_corpus,
        set_threads,
        threads,
        version,
    )

__version__ = version()

__all__ = [
    "CapError",
    "InputError",
    "algebra_norm",
    "build_phi_star",
    "coset_fit",
    "detect_affine",
    "dirichlet_approx",
    "extract_maximal",
    "find_invariant_subgroup",
    "graph_norm_identity_check",
    "indicator_norm",
    "kappa_statistic",
    "norm_profile",
    "run_corpus",
    "set_threads",
    "threads",
    "version",
]
