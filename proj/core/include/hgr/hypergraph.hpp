#pragma once

#include <hgr/corpus.hpp>
#include <hgr/sparse.hpp>

namespace hgr {

/// Binary |V| x |S| incidence: entry (i, j) = 1 iff entity i appears in
/// sentence j. Sentences without entities keep their (all-zero) column so
/// sentence indexing stays stable.
SparseMatrix buildStructuralIncidence(const Corpus& corpus);

} // namespace hgr
