#pragma once

// Umbrella header for the whole library.

#include "eegloop/core.hpp"
#include "eegloop/dominance.hpp"
#include "eegloop/dsp.hpp"
#include "eegloop/fft.hpp"
#include "eegloop/ingest.hpp"
#include "eegloop/json_codec.hpp"
#include "eegloop/packet.hpp"
#include "eegloop/pipeline.hpp"
#include "eegloop/recording.hpp"
#include "eegloop/report.hpp"
#include "eegloop/rng.hpp"
#include "eegloop/session.hpp"
#include "eegloop/stream.hpp"
