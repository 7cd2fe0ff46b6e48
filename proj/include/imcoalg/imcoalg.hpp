#pragma once

#include "bisim.hpp"
#include "enumerate.hpp"
#include "error.hpp"
#include "frame_file.hpp"
#include "frames.hpp"
#include "freealg.hpp"
#include "functor.hpp"
#include "ghilardi.hpp"
#include "heyting.hpp"
#include "logic.hpp"
#include "modal_frame.hpp"
#include "poset.hpp"
#include "subset.hpp"
