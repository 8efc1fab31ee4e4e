#pragma once

#include "cwc/closed_form.hpp"
#include "cwc/contact_model.hpp"
#include "cwc/errors.hpp"
#include "cwc/force_reconstruction.hpp"
#include "cwc/polytope.hpp"
#include "cwc/rational.hpp"
#include "cwc/sampling.hpp"
#include "cwc/simplex.hpp"
#include "cwc/trajectory.hpp"
#include "cwc/validation.hpp"
