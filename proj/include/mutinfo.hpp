#pragma once

#include "mutinfo/error.hpp"
#include "mutinfo/linalg.hpp"
#include "mutinfo/operator.hpp"
#include "mutinfo/entropy.hpp"
#include "mutinfo/channel.hpp"
#include "mutinfo/capacity.hpp"
#include "mutinfo/entanglement.hpp"
#include "mutinfo/seqinfo.hpp"
#include "mutinfo/phylo.hpp"
#include "mutinfo/gencode.hpp"
