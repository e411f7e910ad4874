#pragma once

#include "qtwist/algebra.hpp"
#include "qtwist/derived.hpp"
#include "qtwist/error.hpp"
#include "qtwist/format.hpp"
#include "qtwist/hopf.hpp"
#include "qtwist/io.hpp"
#include "qtwist/linalg.hpp"
#include "qtwist/normal_order.hpp"
#include "qtwist/rational.hpp"
#include "qtwist/series_matrix.hpp"
#include "qtwist/spec.hpp"
#include "qtwist/tensor.hpp"
#include "qtwist/verify.hpp"
