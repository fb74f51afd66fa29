#pragma once

#include "cyclobox/errors.hpp"
#include "cyclobox/exact_rational.hpp"
#include "cyclobox/primality.hpp"
#include "cyclobox/cyclotomic.hpp"
#include "cyclobox/poles.hpp"
#include "cyclobox/rng.hpp"
#include "cyclobox/parallel.hpp"
#include "cyclobox/sampling.hpp"
#include "cyclobox/moments.hpp"
#include "cyclobox/concentration.hpp"
#include "cyclobox/visibility.hpp"
#include "cyclobox/report.hpp"
#include "cyclobox/scene.hpp"
#include "cyclobox/config.hpp"
