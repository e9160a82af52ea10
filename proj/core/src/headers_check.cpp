// Compiles every public header standalone so missing includes surface here
// rather than in downstream consumers.
#include "holo/adam.hpp"
#include "holo/convergence.hpp"
#include "holo/dataset.hpp"
#include "holo/estimator.hpp"
#include "holo/fft.hpp"
#include "holo/field.hpp"
#include "holo/grid.hpp"
#include "holo/hologram.hpp"
#include "holo/loss.hpp"
#include "holo/metrics.hpp"
#include "holo/nn.hpp"
#include "holo/optimize.hpp"
#include "holo/parallel.hpp"
#include "holo/perm_loss.hpp"
#include "holo/png_io.hpp"
#include "holo/power.hpp"
#include "holo/procedural.hpp"
#include "holo/propagation.hpp"
#include "holo/rng.hpp"
#include "holo/scene.hpp"
#include "holo/serialize.hpp"
#include "holo/tensor.hpp"
#include "holo/train.hpp"

namespace holo {
template struct Grid2<float>;
template struct Grid2<double>;
template double image_loss<float>(const PhaseHologramSet<float>&, const LaserPowerMatrix<float>&,
                                  const TargetScene<float>&, double, const std::vector<double>&,
                                  TransferCache<float>*);
template double image_loss<double>(const PhaseHologramSet<double>&, const LaserPowerMatrix<double>&,
                                   const TargetScene<double>&, double, const std::vector<double>&,
                                   TransferCache<double>*);
template OptimizeResult<float> optimize_multicolor<float>(const TargetScene<float>&,
                                                          const std::vector<double>&, double,
                                                          const OptimizationConfig&,
                                                          const LaserPowerMatrix<float>*, PowerMode, int,
                                                          const std::vector<int>*);
template OptimizeResult<double> optimize_multicolor<double>(const TargetScene<double>&,
                                                            const std::vector<double>&, double,
                                                            const OptimizationConfig&,
                                                            const LaserPowerMatrix<double>*, PowerMode, int,
                                                            const std::vector<int>*);
template class EstimatorNet<float>;
template class EstimatorNet<double>;
template std::pair<TrainState<float>, TrainOutcome<float>> train_estimator<float>(
    const std::vector<TrainItem<float>>&, const TrainingConfig&, const EpochCallback<float>&);
template std::pair<TrainState<double>, TrainOutcome<double>> train_estimator<double>(
    const std::vector<TrainItem<double>>&, const TrainingConfig&, const EpochCallback<double>&);
template double ssim<float>(const Grid2<float>&, const Grid2<float>&, double);
template double ssim<double>(const Grid2<double>&, const Grid2<double>&, double);
}  // namespace holo
