#pragma once

#include "qdcascade/errors.hpp"
#include "qdcascade/linalg.hpp"
#include "qdcascade/cascade.hpp"
#include "qdcascade/correlator.hpp"
#include "qdcascade/tomography.hpp"
#include "qdcascade/metrics.hpp"
#include "qdcascade/experiment.hpp"
#include "qdcascade/emit.hpp"
#include "qdcascade/config.hpp"
#include "qdcascade/validation.hpp"
