#pragma once

#include "peakon/closed_form.hpp"
#include "peakon/csv.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/error.hpp"
#include "peakon/experiments.hpp"
#include "peakon/integrate.hpp"
#include "peakon/kernel.hpp"
#include "peakon/report.hpp"
#include "peakon/sobolev.hpp"
#include "peakon/types.hpp"
