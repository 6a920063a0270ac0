#pragma once

#include "run_config.hpp"

#include "firetke/dataset.hpp"
#include "firetke/ingest.hpp"
#include "firetke/turbulence.hpp"

namespace firetke::cli {

/// Everything the data pipeline produces before modeling.
struct PipelineResult {
  std::vector<ingest::AlignedFrame> frames;  ///< segmented
  turbulence::BaselineMeans means;
  turbulence::TkeSeries series;
  Dataset dataset;  ///< burn-phase rows with the configured target
  std::size_t sonic_rejected = 0;
  std::size_t thermo_rejected = 0;
  std::size_t sonic_dropped = 0;
  std::size_t thermo_dropped = 0;
};

/// ingest -> align -> segment -> baseline -> TKE -> dataset.
PipelineResult run_pipeline(const RunConfig& config);

}  // namespace firetke::cli
