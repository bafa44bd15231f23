#pragma once

#include "wpcclean/baselines.hpp"
#include "wpcclean/bench.hpp"
#include "wpcclean/binary_image.hpp"
#include "wpcclean/contour.hpp"
#include "wpcclean/error.hpp"
#include "wpcclean/image_io.hpp"
#include "wpcclean/moments.hpp"
#include "wpcclean/morphology.hpp"
#include "wpcclean/pipeline.hpp"
#include "wpcclean/raster.hpp"
#include "wpcclean/report.hpp"
#include "wpcclean/scada_io.hpp"
#include "wpcclean/synth.hpp"
