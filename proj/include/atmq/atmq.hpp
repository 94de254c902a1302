#pragma once

#include "atmq/bell.hpp"
#include "atmq/channel.hpp"
#include "atmq/detector.hpp"
#include "atmq/entangle.hpp"
#include "atmq/errors.hpp"
#include "atmq/homodyne.hpp"
#include "atmq/io.hpp"
#include "atmq/numerics.hpp"
#include "atmq/pdt.hpp"
#include "atmq/photocount.hpp"
#include "atmq/random.hpp"
#include "atmq/states.hpp"
#include "atmq/sweep.hpp"

namespace atmq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace atmq
