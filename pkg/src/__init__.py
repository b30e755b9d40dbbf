"""Surface Positivity Toolkit - exact Zariski decompositions, base loci of split bundles and log-Chern characters."""
