#pragma once

#include "urdf_inspect/bundle_analysis.hpp"
#include "urdf_inspect/bundle_scan.hpp"
#include "urdf_inspect/compare.hpp"
#include "urdf_inspect/corpus.hpp"
#include "urdf_inspect/dedup.hpp"
#include "urdf_inspect/kinematics.hpp"
#include "urdf_inspect/model.hpp"
#include "urdf_inspect/report.hpp"
#include "urdf_inspect/result.hpp"
#include "urdf_inspect/validator.hpp"
