#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scs/free_witness.hpp"
#include "scs/star_glue.hpp"
#include "scs/vf_witness.hpp"

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw scs::UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& jsonText, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << jsonText << "\n";
        return;
    }
    std::ofstream out(outPath);
    if (!out) throw scs::UsageError("cannot write " + outPath);
    out << jsonText << "\n";
}

std::vector<scs::Word> parseWords(const std::vector<std::string>& texts,
                                  const scs::Alphabet& a) {
    std::vector<scs::Word> ws;
    for (const auto& t : texts) ws.push_back(scs::Word::parse(t, a));
    return ws;
}

std::vector<scs::GPath> parsePaths(const scs::GraphOfGroups& g,
                                   const std::vector<std::string>& texts) {
    std::vector<scs::GPath> ps;
    for (const auto& t : texts) ps.push_back(scs::GPath::parse(g, t));
    return ps;
}

scs::CoverLimits limitsFromEnv() {
    scs::CoverLimits limits;
    if (const char* cap = std::getenv("SCS_MAX_SHEETS"))
        limits.maxSheets = std::atol(cap);
    return limits;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conjugacy separability witnesses for free and virtually "
                 "free groups"};
    app.set_version_flag("--version", "1");
    app.require_subcommand(0, 1);
    std::function<int()> run;

    // ---- free ----
    auto* freeCmd = app.add_subcommand("free", "free group pipelines");
    freeCmd->require_subcommand(1);
    {
        static int rank = 2;
        static std::vector<std::string> h1, h2;
        static std::string kStrategy = "exact", outPath;
        auto* w = freeCmd->add_subcommand("witness",
                                       "build a non-conj-into certificate");
        w->add_option("--rank", rank);
        w->add_option("--h1", h1)->required();
        w->add_option("--h2", h2)->required();
        w->add_option("--k", kStrategy);
        w->add_option("-o,--out", outPath);
        w->callback([&] {
            run = [] {
                scs::Alphabet a(rank);
                auto cert = scs::sicsWitness(parseWords(h1, a),
                                             parseWords(h2, a), a,
                                             scs::KStrategy::parse(kStrategy),
                                             limitsFromEnv());
                emit(cert.toJson(), outPath);
                return 0;
            };
        });
    }
    {
        static std::string certPath;
        auto* v = freeCmd->add_subcommand("verify", "re-check a certificate");
        v->add_option("cert", certPath)->required();
        v->callback([&] {
            run = [] {
                auto cert = scs::WitnessCertificate::fromJson(readFile(certPath));
                auto res = scs::verifyCertificate(cert);
                if (!res.ok) {
                    std::cerr << "verification failed: " << res.reason << "\n";
                    std::cout << "{\"ok\":false}\n";
                    return 1;
                }
                std::cout << "{\"ok\":true}\n";
                return 0;
            };
        });
    }
    {
        static int rank = 2;
        static std::vector<std::string> h1, h2;
        static std::string kStrategy = "exact";
        auto* c = freeCmd->add_subcommand(
            "conj", "conjugator or one-directional witness");
        c->add_option("--rank", rank);
        c->add_option("--h1", h1)->required();
        c->add_option("--h2", h2)->required();
        c->add_option("--k", kStrategy);
        c->callback([&] {
            run = [] {
                scs::Alphabet a(rank);
                auto res = scs::scsWitness(parseWords(h1, a), parseWords(h2, a),
                                           a, scs::KStrategy::parse(kStrategy),
                                           limitsFromEnv());
                std::cout << res.toJson() << "\n";
                return 0;
            };
        });
    }
    {
        static int rank = 2;
        static bool saturate = false;
        static std::vector<std::string> gens;
        auto* f = freeCmd->add_subcommand("fold", "Stallings graph of a subgroup");
        f->add_option("--rank", rank);
        f->add_option("--gens", gens)->required();
        f->add_flag("--saturate", saturate);
        f->callback([&] {
            run = [] {
                scs::Alphabet a(rank);
                auto g = scs::SubgroupGraph::fold(parseWords(gens, a), a);
                if (saturate) g = g.saturate();
                std::cout << g.toJson() << "\n";
                return 0;
            };
        });
    }
    {
        static int rank = 2, c = 4;
        static std::string kStrategy = "exact", outPath;
        auto* gc = freeCmd->add_subcommand(
            "girth-cover", "normal finite-index cover of girth > C");
        gc->add_option("--rank", rank);
        gc->add_option("--c", c)->required();
        gc->add_option("--k", kStrategy);
        gc->add_option("-o,--out", outPath);
        gc->callback([&] {
            run = [] {
                scs::Alphabet a(rank);
                auto [cover, cert] = scs::buildK(
                    a, c, scs::KStrategy::parse(kStrategy), limitsFromEnv());
                emit(cert.toJson(), outPath);
                return 0;
            };
        });
    }

    // ---- glue ----
    {
        static int r = 2, s = 2, t = 2;
        static std::uint64_t seed = 0;
        auto* gl = app.add_subcommand("glue", "star gluing schema");
        gl->add_option("--r", r)->required();
        gl->add_option("--s", s)->required();
        gl->add_option("--t", t)->required();
        gl->add_option("--seed", seed);
        gl->callback([&] {
            run = [] {
                std::cout << scs::glueStars(r, s, t, seed).toJson() << "\n";
                return 0;
            };
        });
    }

    // ---- gog ----
    auto* gog = app.add_subcommand("gog", "graph-of-groups pipelines");
    gog->require_subcommand(1);
    {
        static std::string gogPath;
        auto* ck = gog->add_subcommand("check", "normalizer condition");
        ck->add_option("gog", gogPath)->required();
        ck->callback([&] {
            run = [] {
                auto g = scs::GraphOfGroups::fromJson(readFile(gogPath));
                g.validate();
                auto rep = scs::checkNormalizerCondition(g);
                bool holds =
                    rep.verdict == scs::NormalizerReport::Verdict::Holds;
                std::cout << (holds
                                  ? std::string("{\"verdict\":\"holds\"}")
                                  : "{\"verdict\":\"fails\",\"dir_edge\":" +
                                        std::to_string(rep.dirEdge) + "}")
                          << "\n";
                return holds ? 0 : 1;
            };
        });
    }
    {
        static std::string gogPath, pathText;
        auto* rd = gog->add_subcommand("reduce", "normal form of a path");
        rd->add_option("gog", gogPath)->required();
        rd->add_option("--path", pathText)->required();
        rd->callback([&] {
            run = [] {
                auto g = scs::GraphOfGroups::fromJson(readFile(gogPath));
                g.validate();
                auto p = scs::reducePath(g, scs::GPath::parse(g, pathText));
                std::cout << "{\"reduced\":\"" << p.str(g)
                          << "\",\"length\":" << p.length() << "}\n";
                return 0;
            };
        });
    }
    {
        static std::string gogPath, outPath;
        static std::vector<std::string> gens;
        auto* fd = gog->add_subcommand("fold", "pre-covering of a subgroup");
        fd->add_option("gog", gogPath)->required();
        fd->add_option("--gens", gens)->required();
        fd->add_option("-o,--out", outPath);
        fd->callback([&] {
            run = [] {
                auto g = scs::GraphOfGroups::fromJson(readFile(gogPath));
                g.validate();
                auto z = scs::foldSubgroup(g, parsePaths(g, gens));
                emit(z.toJson(), outPath);
                return 0;
            };
        });
    }
    {
        static std::string gogPath, covPath;
        auto* vl = gog->add_subcommand("validate", "check a pre-covering");
        vl->add_option("precovering", covPath)->required();
        vl->add_option("--gog", gogPath)->required();
        vl->callback([&] {
            run = [] {
                auto g = scs::GraphOfGroups::fromJson(readFile(gogPath));
                g.validate();
                auto z = scs::PreCovering::fromJson(g, readFile(covPath));
                z.validate();
                std::cout << "{\"ok\":true,\"pieces\":" << z.numPieces()
                          << "}\n";
                return 0;
            };
        });
    }

    // ---- vf ----
    auto* vf = app.add_subcommand("vf", "virtually free (tree of finite "
                                        "groups) pipelines");
    vf->require_subcommand(1);
    {
        static std::string gogPath, outPath;
        static std::vector<std::string> h1, h2;
        static std::uint64_t seed = 0;
        static bool assume = false;
        auto* w = vf->add_subcommand("witness",
                                     "build a non-conj-into certificate");
        w->add_option("gog", gogPath)->required();
        w->add_option("--h1", h1);
        w->add_option("--h2", h2)->required();
        w->add_option("--seed", seed);
        w->add_flag("--assume-normalizer-condition", assume);
        w->add_option("-o,--out", outPath);
        w->callback([&] {
            run = [] {
                auto g = scs::GraphOfGroups::fromJson(readFile(gogPath));
                g.validate();
                auto cert = scs::vfSicsWitness(g, parsePaths(g, h1),
                                               parsePaths(g, h2), seed, assume);
                emit(cert.toJson(), outPath);
                return 0;
            };
        });
    }
    {
        static std::string certPath;
        auto* v = vf->add_subcommand("verify", "re-check a certificate");
        v->add_option("cert", certPath)->required();
        v->callback([&] {
            run = [] {
                auto cert =
                    scs::VfWitnessCertificate::fromJson(readFile(certPath));
                auto res = scs::verifyVfCertificate(cert);
                if (!res.ok) {
                    std::cerr << "verification failed: " << res.reason << "\n";
                    std::cout << "{\"ok\":false}\n";
                    return 1;
                }
                std::cout << "{\"ok\":true}\n";
                return 0;
            };
        });
    }
    {
        static std::string gogPath;
        static std::vector<std::string> h1, h2;
        static std::uint64_t seed = 0;
        auto* d = vf->add_subcommand("decide",
                                     "conjugator or witness, whichever exists");
        d->add_option("gog", gogPath)->required();
        d->add_option("--h1", h1);
        d->add_option("--h2", h2)->required();
        d->add_option("--seed", seed);
        d->callback([&] {
            run = [] {
                auto g = scs::GraphOfGroups::fromJson(readFile(gogPath));
                g.validate();
                auto res = scs::vfConjIntoDecide(g, parsePaths(g, h1),
                                                 parsePaths(g, h2), seed);
                std::cout << res.toJson() << "\n";
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (!run) {
        std::cerr << app.help();
        return 2;
    }
    try {
        return run();
    } catch (const scs::ConjugateIntoError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const scs::VfConjugateIntoError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const scs::NormalizerUnverifiedError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const scs::NormalizerConditionError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const scs::VerificationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const scs::ResourceError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
