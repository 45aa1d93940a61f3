#pragma once

#include "qnva/config.hpp"
#include "qnva/consistency.hpp"
#include "qnva/errors.hpp"
#include "qnva/experiments.hpp"
#include "qnva/network.hpp"
#include "qnva/proof.hpp"
#include "qnva/protocol.hpp"
#include "qnva/report_io.hpp"
#include "qnva/rng.hpp"
#include "qnva/round.hpp"
#include "qnva/sequence.hpp"
#include "qnva/source.hpp"
