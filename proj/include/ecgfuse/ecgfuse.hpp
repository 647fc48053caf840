// ecgfuse.hpp - umbrella header pulling in the whole library.
#pragma once

#include "config.hpp"
#include "embedding.hpp"
#include "errors.hpp"
#include "fis.hpp"
#include "lwlpa.hpp"
#include "nfda.hpp"
#include "recordio.hpp"
#include "synthgen.hpp"
#include "types.hpp"
#include "vcgprep.hpp"
