#ifndef ALBUM_ALBUM_HPP_
#define ALBUM_ALBUM_HPP_

#include "album/types.hpp"
#include "album/symmetric_eigen.hpp"
#include "album/prox.hpp"
#include "album/model.hpp"
#include "album/lagrangian.hpp"
#include "album/maps.hpp"
#include "album/driver.hpp"
#include "album/analysis.hpp"
#include "album/gallery.hpp"
#include "album/diagnostics.hpp"

#endif  // ALBUM_ALBUM_HPP_
