#pragma once

#include "sppic/bipartite.hpp"
#include "sppic/choice.hpp"
#include "sppic/edge_vector.hpp"
#include "sppic/error.hpp"
#include "sppic/graph.hpp"
#include "sppic/half_partnership.hpp"
#include "sppic/instance.hpp"
#include "sppic/io.hpp"
#include "sppic/oracle.hpp"
#include "sppic/poset.hpp"
#include "sppic/symmetric.hpp"
