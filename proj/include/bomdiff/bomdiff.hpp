#pragma once

#include "bomdiff/error.hpp"
#include "bomdiff/export.hpp"
#include "bomdiff/graph.hpp"
#include "bomdiff/ingest.hpp"
#include "bomdiff/mapping.hpp"
#include "bomdiff/merge.hpp"
#include "bomdiff/similarity.hpp"
#include "bomdiff/version.hpp"
