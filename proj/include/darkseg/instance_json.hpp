#pragma once

#include <filesystem>
#include <string>

#include "darkseg/raster.hpp"

namespace darkseg {

/// The file contract through which external segmentation models deliver
/// predictions, one JSON document per image:
///
///   {
///     "image_id": "frame_0001",
///     "width": 640, "height": 480,
///     "instances": [
///       { "class": "wall",
///         "bbox": [x_min, y_min, x_max, y_max],   // half-open pixel box
///         "score": 0.87,
///         "mask_rle": "0:120,1:14,..." }          // see rle.hpp
///     ]
///   }
///
/// Loading enforces the data invariants: RLE counts sum to width*height,
/// each mask has at least one set pixel, the stored bbox equals the tight
/// box recomputed from the mask, and score lies in [0,1].
std::string instance_set_to_json(const InstanceSet & set);
InstanceSet instance_set_from_json(const std::string & text);

void save_instance_set(const InstanceSet & set, const std::filesystem::path & path);
InstanceSet load_instance_set(const std::filesystem::path & path);

} // namespace darkseg
