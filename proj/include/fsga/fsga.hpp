#pragma once

#include "fsga/classify.hpp"
#include "fsga/corpus.hpp"
#include "fsga/error.hpp"
#include "fsga/expr.hpp"
#include "fsga/fock.hpp"
#include "fsga/fourier.hpp"
#include "fsga/freeness.hpp"
#include "fsga/gauge.hpp"
#include "fsga/graph.hpp"
#include "fsga/matrix_forms.hpp"
#include "fsga/path.hpp"
#include "fsga/radical.hpp"
#include "fsga/sparse.hpp"
#include "fsga/spectral.hpp"
#include "fsga/types.hpp"
#include "fsga/verify.hpp"
