#pragma once

#include "symsdp/problems/facet.hpp"
#include "symsdp/problems/i3322.hpp"
#include "symsdp/problems/multiparty.hpp"
#include "symsdp/problems/problem.hpp"
#include "symsdp/problems/rac.hpp"
#include "symsdp/problems/sic_witness.hpp"
