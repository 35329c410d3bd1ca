#include "darkseg/instance_json.hpp"

#include <fstream>

#include <json.hpp>

#include "darkseg/rle.hpp"

namespace darkseg {

using nlohmann::json;

std::string instance_set_to_json(const InstanceSet & set) {
    json doc;
    doc["image_id"] = set.image_id;
    doc["width"] = set.width;
    doc["height"] = set.height;
    doc["instances"] = json::array();
    for (const Instance & inst : set.instances) {
        json j;
        j["class"] = std::string(class_name(inst.cls));
        j["bbox"] = {inst.bbox.x_min, inst.bbox.y_min, inst.bbox.x_max, inst.bbox.y_max};
        j["score"] = inst.score;
        j["mask_rle"] = encode_rle(inst.mask);
        doc["instances"].push_back(std::move(j));
    }
    return doc.dump(2);
}

InstanceSet instance_set_from_json(const std::string & text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception & e) {
        throw DecodeError(std::string("instance set: invalid JSON: ") + e.what());
    }

    InstanceSet set;
    try {
        set.image_id = doc.at("image_id").get<std::string>();
        set.width = doc.at("width").get<int>();
        set.height = doc.at("height").get<int>();
        if (set.width <= 0 || set.height <= 0) {
            throw DecodeError("instance set '" + set.image_id + "': non-positive dimensions");
        }
        for (const json & j : doc.at("instances")) {
            const std::string cls_name = j.at("class").get<std::string>();
            const auto cls = class_from_name(cls_name);
            if (!cls) {
                throw DecodeError("instance set '" + set.image_id +
                                  "': unknown class '" + cls_name + "'");
            }
            const float score = j.at("score").get<float>();
            if (!(score >= 0.0f && score <= 1.0f)) {
                throw DecodeError("instance set '" + set.image_id +
                                  "': score outside [0,1]");
            }
            BinaryMask mask =
                decode_rle(j.at("mask_rle").get<std::string>(), set.width, set.height);

            Instance inst = make_instance(*cls, std::move(mask), score);

            const auto & bbox = j.at("bbox");
            if (bbox.size() != 4) {
                throw DecodeError("instance set '" + set.image_id + "': bbox must have 4 entries");
            }
            const Box stored{bbox[0].get<int>(), bbox[1].get<int>(),
                             bbox[2].get<int>(), bbox[3].get<int>()};
            if (stored != inst.bbox) {
                throw DecodeError("instance set '" + set.image_id +
                                  "': bbox does not match the tight box of the mask");
            }
            set.instances.push_back(std::move(inst));
        }
    } catch (const json::exception & e) {
        throw DecodeError(std::string("instance set: missing or mistyped field: ") + e.what());
    } catch (const EmptyMaskError &) {
        throw DecodeError("instance set '" + set.image_id + "': instance mask has no set pixel");
    }
    return set;
}

void save_instance_set(const InstanceSet & set, const std::filesystem::path & path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DecodeError("cannot open for writing: " + path.string());
    }
    out << instance_set_to_json(set) << '\n';
    if (!out) {
        throw DecodeError("write failed: " + path.string());
    }
}

InstanceSet load_instance_set(const std::filesystem::path & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DecodeError("cannot open: " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return instance_set_from_json(text);
    } catch (const DecodeError & e) {
        throw DecodeError(std::string(e.what()) + " [" + path.string() + "]");
    }
}

} // namespace darkseg
