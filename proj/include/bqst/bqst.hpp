#pragma once

#include "bqst/amplitude.hpp"
#include "bqst/asymptotic.hpp"
#include "bqst/chain.hpp"
#include "bqst/dynamics.hpp"
#include "bqst/optimizer.hpp"
#include "bqst/oracle.hpp"
#include "bqst/spectral.hpp"
