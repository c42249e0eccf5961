#pragma once

#include "partmix/common.hpp"
#include "partmix/interference.hpp"
#include "partmix/io.hpp"
#include "partmix/partitions.hpp"
#include "partmix/reconstruct.hpp"
#include "partmix/sampling.hpp"
#include "partmix/set_partition.hpp"
#include "partmix/spectrum.hpp"
#include "partmix/states.hpp"
#include "partmix/symgroup.hpp"
#include "partmix/tomography.hpp"
