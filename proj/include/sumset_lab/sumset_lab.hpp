#pragma once

#include "sumset_lab/common.hpp"
#include "sumset_lab/group.hpp"
#include "sumset_lab/tensor_set.hpp"
#include "sumset_lab/set_io.hpp"
#include "sumset_lab/counting.hpp"
#include "sumset_lab/regularity.hpp"
#include "sumset_lab/correlation.hpp"
#include "sumset_lab/structure.hpp"
#include "sumset_lab/constructions.hpp"
#include "sumset_lab/certificate_json.hpp"
