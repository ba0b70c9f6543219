#pragma once

#include "confalg/indices.hpp"
#include "confalg/freealg.hpp"
#include "confalg/engine.hpp"
#include "confalg/rewrite.hpp"
#include "confalg/envelope.hpp"
#include "confalg/text.hpp"
