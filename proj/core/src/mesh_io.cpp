#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cpdd/surface.hpp"

namespace cpdd {

namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

[[noreturn]] void fail(const std::string& path, int line_no, const std::string& message) {
    throw Error(ErrorCode::bad_mesh_record,
                path + ":" + std::to_string(line_no) + ": " + message);
}

}  // namespace

TriMesh TriMesh::load_off(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open mesh file " + path);

    // Token stream with line tracking; '#' starts a comment.
    std::vector<std::pair<std::string, int>> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(strip_comment(line));
        std::string tok;
        while (ls >> tok) tokens.emplace_back(tok, line_no);
    }
    std::size_t pos = 0;
    auto next = [&](const char* what) -> const std::pair<std::string, int>& {
        if (pos >= tokens.size()) fail(path, line_no, std::string("unexpected end of file, expected ") + what);
        return tokens[pos++];
    };
    auto next_int = [&](const char* what) {
        const auto& [tok, ln] = next(what);
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            fail(path, ln, "expected integer " + std::string(what) + ", got '" + tok + "'");
        }
    };
    auto next_double = [&](const char* what) {
        const auto& [tok, ln] = next(what);
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            fail(path, ln, "expected number " + std::string(what) + ", got '" + tok + "'");
        }
    };

    const auto& [magic, magic_line] = next("OFF header");
    if (magic != "OFF") fail(path, magic_line, "not an OFF file (header '" + magic + "')");
    int nv = next_int("vertex count");
    int nf = next_int("face count");
    next_int("edge count");
    if (nv <= 0 || nf <= 0) throw Error(ErrorCode::empty_mesh, path + ": mesh has no geometry");

    std::vector<Vec3> vertices(nv);
    for (int i = 0; i < nv; ++i) {
        vertices[i].x = next_double("x");
        vertices[i].y = next_double("y");
        vertices[i].z = next_double("z");
    }
    std::vector<std::array<int, 3>> triangles(nf);
    for (int i = 0; i < nf; ++i) {
        int arity = next_int("face vertex count");
        if (arity != 3) {
            fail(path, tokens[pos - 1].second,
                 "only triangular faces are supported (face has " + std::to_string(arity) +
                     " vertices)");
        }
        triangles[i] = {next_int("v0"), next_int("v1"), next_int("v2")};
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh TriMesh::load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open mesh file " + path);

    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(strip_comment(line));
        std::string keyword;
        if (!(ls >> keyword)) continue;
        if (keyword == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z)) fail(path, line_no, "vertex record needs 3 coordinates");
            std::string extra;
            if (ls >> extra) fail(path, line_no, "vertex record has trailing data '" + extra + "'");
            vertices.push_back(v);
        } else if (keyword == "f") {
            std::vector<int> ids;
            std::string ref;
            while (ls >> ref) {
                // Face references may carry /texture/normal suffixes; the
                // vertex id is the leading integer.
                std::string head = ref.substr(0, ref.find('/'));
                try {
                    std::size_t used = 0;
                    int id = std::stoi(head, &used);
                    if (used != head.size() || id <= 0) throw std::invalid_argument(head);
                    ids.push_back(id - 1);
                } catch (const std::exception&) {
                    fail(path, line_no, "bad face vertex reference '" + ref + "'");
                }
            }
            if (ids.size() != 3) {
                fail(path, line_no, "only triangular faces are supported (face has " +
                                        std::to_string(ids.size()) + " vertices)");
            }
            triangles.push_back({ids[0], ids[1], ids[2]});
        } else {
            fail(path, line_no,
                 "unsupported OBJ record '" + keyword + "' (only vertices and triangular faces)");
        }
    }
    if (vertices.empty() || triangles.empty()) {
        throw Error(ErrorCode::empty_mesh, path + ": mesh has no geometry");
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

}  // namespace cpdd
