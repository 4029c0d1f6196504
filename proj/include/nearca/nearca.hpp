#pragma once

#include "nearca/error.hpp"
#include "nearca/fields.hpp"
#include "nearca/matrix.hpp"
#include "nearca/groups.hpp"
#include "nearca/twisted.hpp"
#include "nearca/group_ring.hpp"
#include "nearca/near_ring.hpp"
#include "nearca/kaplansky.hpp"
#include "nearca/ca.hpp"
#include "nearca/linear_ca.hpp"
#include "nearca/sofic.hpp"
#include "nearca/parse.hpp"
#include "nearca/io.hpp"
#include "nearca/jobs.hpp"
