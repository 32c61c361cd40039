#pragma once

#include "envwit/analytic.hpp"
#include "envwit/choi.hpp"
#include "envwit/errors.hpp"
#include "envwit/io/json_io.hpp"
#include "envwit/io/toml_io.hpp"
#include "envwit/linalg.hpp"
#include "envwit/pipeline.hpp"
#include "envwit/probability.hpp"
#include "envwit/protocol.hpp"
#include "envwit/relaxation/builder.hpp"
#include "envwit/sdp/problem.hpp"
#include "envwit/sdp/sdpa.hpp"
#include "envwit/sdp/solve.hpp"
#include "envwit/search.hpp"
#include "envwit/sparse/pattern.hpp"
#include "envwit/sparse/reducer.hpp"
#include "envwit/symmetric/projection.hpp"
#include "envwit/symmetric/types.hpp"
