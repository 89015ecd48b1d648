/* Copyright 2026 The APE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Generated by tests/oracles/make_fixtures.py; do not edit.

#ifndef APE_TESTS_ORACLE_FIXTURES_HPP_
#define APE_TESTS_ORACLE_FIXTURES_HPP_

namespace ape::fixtures {

inline constexpr double kSsimNoise = 0.95088367695853016;
inline constexpr double kSsimGray = 0.95012933989027148;
inline constexpr double kSsimSmooth = 0.64599153654853003;
inline constexpr double kPsnrNoise = 21.761051736218487;
inline constexpr float kBicubicDown2[] = {0.677215934f, 0.655991256f, 0.2854321f, 0.560010374f, 0.615021706f, 0.496644527f, 0.317628115f, 0.398553818f, 0.581701756f, 0.223560765f, 0.267620444f, 0.483673066f, 0.676066995f, 0.574761927f, 0.589024246f, 0.391656309f, 0.316818506f, 0.422546387f, 0.520986557f, 0.549472153f, 0.722367227f, 0.197398648f, 0.195753396f, 0.650224268f, 0.477990627f, 0.600085616f, 0.390146643f, 0.541297793f, 0.586539686f, 0.443985224f, 0.328364015f, 0.38673228f, 0.533699989f, 0.557485282f, 0.493554145f, 0.526658893f, 0.321460515f, 0.495737553f, 0.602469921f, 0.691631734f, 0.499465168f, 0.435953796f, 0.529976964f, 0.432816625f, 0.388836414f, 0.421135306f, 0.395013809f, 0.339885741f, 0.379705518f, 0.553923309f, 0.333526909f, 0.501904011f, 0.558312654f, 0.527620494f, 0.790617764f, 0.5659374f, 0.523811162f, 0.520186365f, 0.416985184f, 0.70873636f, 0.563742757f, 0.384363562f, 0.654420614f, 0.535236299f, 0.445637137f, 0.565039515f, 0.626331389f, 0.436685026f, 0.620525539f, 0.428422779f, 0.564046144f, 0.530817449f, 0.619094968f, 0.407820702f, 0.32771793f, 0.564621329f, 0.706303298f, 0.387115657f, 0.337977052f, 0.573299527f, 0.420748621f, 0.327841073f, 0.564472973f, 0.430501789f, 0.30423829f, 0.527748525f, 0.618623793f, 0.434990227f, 0.515736699f, 0.629461467f, 0.427894831f, 0.384459615f, 0.320080757f, 0.459509224f, 0.557402432f, 0.341729879f, 0.458429247f, 0.62187326f, 0.385820061f, 0.303623706f, 0.308866262f, 0.397762954f, 0.490890354f, 0.534682393f, 0.583328366f, 0.28763023f, 0.380273283f, 0.299911529f, 0.575722992f, 0.368275464f, 0.540747821f, 0.448253274f, 0.563205957f, 0.368022144f, 0.458714694f, 0.458519489f, 0.494244933f, 0.724708438f, 0.453569859f, 0.417530596f, 0.579881847f, 0.674908578f, 0.360085636f, 0.328309715f, 0.383689076f, 0.348342955f, 0.372614324f, 0.509818137f, 0.395269305f, 0.405168742f, 0.497208983f, 0.521577835f, 0.47444883f, 0.62126261f, 0.664577007f, 0.418673038f, 0.42019397f, 0.302799225f, 0.347823441f, 0.502322912f, 0.55964905f, 0.154367492f, 0.654994071f, 0.654508889f, 0.398828149f, 0.339663237f, 0.487039387f, 0.524243176f, 0.395077318f, 0.587047517f, 0.38421458f, 0.680752754f, 0.426370621f, 0.599807143f, 0.675235748f, 0.448277146f, 0.310321361f, 0.496125698f, 0.574807942f, 0.54996556f, 0.575831294f, 0.53558737f};
inline constexpr float kBicubicDown3[] = {0.547116518f, 0.388508439f, 0.624812067f, 0.560913444f, 0.323671967f, 0.499079823f, 0.395456225f, 0.579973757f, 0.334155172f, 0.513280213f, 0.492852896f, 0.447742611f, 0.520588994f, 0.534381151f, 0.433021635f, 0.473533154f, 0.542385042f, 0.464497596f, 0.371839553f, 0.436906159f, 0.533708692f, 0.405508518f, 0.503663063f, 0.477302313f, 0.64765954f, 0.547994554f, 0.472296506f, 0.607396066f, 0.487752646f, 0.571722388f, 0.534075677f, 0.41099906f, 0.601570189f, 0.502660692f, 0.442925096f, 0.513780475f, 0.43017894f, 0.410479069f, 0.424839586f, 0.517714024f, 0.486911684f, 0.554863393f, 0.338651776f, 0.350160033f, 0.505035996f, 0.495476246f, 0.399174571f, 0.351192296f, 0.550521076f, 0.460989058f, 0.560914636f, 0.429993033f, 0.398786664f, 0.425626189f, 0.509139299f, 0.410394788f, 0.480333298f, 0.498427719f, 0.444039196f, 0.565525353f, 0.373360723f, 0.38856405f, 0.422325641f, 0.531953275f, 0.396130443f, 0.649787962f, 0.56453073f, 0.492586315f, 0.374137133f, 0.519528627f, 0.549446404f, 0.527966499f};
inline constexpr float kBicubicUp2[] = {0.658809662f, 0.658809662f, 0.400310695f, 0.449471027f, 0.806290686f, 0.786810219f, 0.391029507f, 0.338715672f, 0.629868746f, 0.601541698f, 0.253734648f, 0.315687239f, 0.787399471f, 0.787399471f, 0.658809662f, 0.658809662f, 0.400310695f, 0.449471027f, 0.806290686f, 0.786810219f, 0.391029507f, 0.338715672f, 0.629868746f, 0.601541698f, 0.253734648f, 0.315687239f, 0.787399471f, 0.787399471f, 0.191605866f, 0.191605866f, 0.274832934f, 0.382317036f, 0.514058173f, 0.539781034f, 0.45948559f, 0.504424453f, 0.674597681f, 0.753307641f, 0.740554392f, 0.785844624f, 0.889178395f, 0.889178395f, 0.120412558f, 0.120412558f, 0.319766313f, 0.439986885f, 0.481074303f, 0.526208043f, 0.575388014f, 0.619098008f, 0.657338142f, 0.759652138f, 0.926040232f, 0.920419455f, 0.742789984f, 0.742789984f, 0.445229709f, 0.445229709f, 0.535110772f, 0.622480571f, 0.707339048f, 0.746091127f, 0.738736749f, 0.682736397f, 0.578090072f, 0.620575309f, 0.810192168f, 0.71941179f, 0.348234296f, 0.348234296f, 0.597769737f, 0.597769737f, 0.552986681f, 0.60628593f, 0.757667422f, 0.823166132f, 0.802781761f, 0.673673272f, 0.435840547f, 0.431550145f, 0.660802066f, 0.590004385f, 0.219157144f, 0.219157144f, 0.578032613f, 0.578032613f, 0.373393953f, 0.39140293f, 0.632059455f, 0.757432938f, 0.76752305f, 0.591908693f, 0.230589628f, 0.192576692f, 0.477869868f, 0.532197118f, 0.355558515f, 0.355558515f, 0.488721192f, 0.488721192f, 0.427422732f, 0.431464016f, 0.500844896f, 0.593521476f, 0.709493458f, 0.636974871f, 0.375965565f, 0.279725075f, 0.348253429f, 0.405623853f, 0.451836318f, 0.451836318f, 0.329835415f, 0.329835415f, 0.715073049f, 0.726469159f, 0.364023715f, 0.331431687f, 0.628692985f, 0.808871925f, 0.871968389f, 0.69299531f, 0.271952778f, 0.210284546f, 0.507990599f, 0.507990599f, 0.329835415f, 0.329835415f, 0.715073049f, 0.726469159f, 0.364023715f, 0.331431687f, 0.628692985f, 0.808871925f, 0.871968389f, 0.69299531f, 0.271952778f, 0.210284546f, 0.507990599f, 0.507990599f, 0.801470339f, 0.801470339f, 0.678955376f, 0.601861954f, 0.570190251f, 0.570532739f, 0.602889478f, 0.628959656f, 0.648743212f, 0.560334563f, 0.363733858f, 0.41830048f, 0.724034429f, 0.724034429f, 0.801470339f, 0.801470339f, 0.678955376f, 0.601861954f, 0.570190251f, 0.570532739f, 0.602889478f, 0.628959656f, 0.648743212f, 0.560334563f, 0.363733858f, 0.41830048f, 0.724034429f, 0.724034429f, 0.576109886f, 0.576109886f, 0.909989417f, 0.819192529f, 0.303719312f, 0.223328367f, 0.578019738f, 0.802477062f, 0.896700561f, 0.910875022f, 0.845000625f, 0.795737147f, 0.763084471f, 0.763084471f, 0.587662518f, 0.587662518f, 0.818460166f, 0.685192823f, 0.187860712f, 0.127371997f, 0.50372678f, 0.730092525f, 0.806469262f, 0.906503499f, 1.03019512f, 0.948972464f, 0.6628353f, 0.6628353f, 0.836128235f, 0.836128235f, 0.404367477f, 0.199862853f, 0.222614363f, 0.282663614f, 0.380010635f, 0.411805868f, 0.378049374f, 0.547219932f, 0.919317484f, 0.878006518f, 0.423286945f, 0.423286945f, 0.69755882f, 0.69755882f, 0.210855886f, 0.119199753f, 0.422590435f, 0.509807765f, 0.380851716f, 0.265136719f, 0.162662774f, 0.304502487f, 0.690655887f, 0.707635641f, 0.355441689f, 0.355441689f, 0.171954215f, 0.171954215f, 0.237925336f, 0.443203568f, 0.787788868f, 0.808804393f, 0.506250024f, 0.290085018f, 0.160309449f, 0.178351194f, 0.344210267f, 0.437859744f, 0.459299594f, 0.459299594f, 0.112544291f, 0.112544291f, 0.233002782f, 0.445508063f, 0.750060081f, 0.739715993f, 0.41447565f, 0.268052757f, 0.300447375f, 0.348430067f, 0.412000954f, 0.434453517f, 0.415787756f, 0.415787756f, 0.519329011f, 0.519329011f, 0.19608824f, 0.126113236f, 0.309403956f, 0.302542418f, 0.105528593f, 0.199039951f, 0.583076537f, 0.814739168f, 0.894027889f, 0.697416902f, 0.224906176f, 0.224906176f, 0.519329011f, 0.519329011f, 0.19608824f, 0.126113236f, 0.309403956f, 0.302542418f, 0.105528593f, 0.199039951f, 0.583076537f, 0.814739168f, 0.894027889f, 0.697416902f, 0.224906176f, 0.224906176f, 0.094101131f, 0.094101131f, 0.26508528f, 0.391191095f, 0.472418576f, 0.421127498f, 0.23731786f, 0.27443704f, 0.532485068f, 0.524836779f, 0.251492143f, 0.273478895f, 0.590797126f, 0.590797126f, 0.094101131f, 0.094101131f, 0.26508528f, 0.391191095f, 0.472418576f, 0.421127498f, 0.23731786f, 0.27443704f, 0.532485068f, 0.524836779f, 0.251492143f, 0.273478895f, 0.590797126f, 0.590797126f, 0.293646842f, 0.293646842f, 0.392521381f, 0.436996162f, 0.427071124f, 0.336276203f, 0.16461134f, 0.174632356f, 0.366339236f, 0.424885601f, 0.350271434f, 0.389554381f, 0.542734444f, 0.542734444f, 0.535717785f, 0.535717785f, 0.537124217f, 0.46154952f, 0.308993697f, 0.247983932f, 0.278520167f, 0.311858058f, 0.347997576f, 0.424892277f, 0.542542219f, 0.597482502f, 0.589713037f, 0.589713037f, 0.82031399f, 0.82031399f, 0.698893726f, 0.464851171f, 0.118186325f, 0.156250715f, 0.579044402f, 0.686114132f, 0.477460057f, 0.524856865f, 0.828304529f, 0.897263229f, 0.731733024f, 0.731733024f, 0.836605787f, 0.836605787f, 0.736624897f, 0.506362259f, 0.145817772f, 0.237798959f, 0.782305837f, 0.878743947f, 0.527113497f, 0.523257256f, 0.867175281f, 0.969846487f, 0.831270814f, 0.831270814f, 0.584593296f, 0.584593296f, 0.650317848f, 0.586082816f, 0.391888082f, 0.492628634f, 0.888304472f, 0.88974756f, 0.496957839f, 0.420093507f, 0.659154594f, 0.815232217f, 0.888326466f, 0.888326466f, 0.425028026f, 0.425028026f, 0.446583718f, 0.464417934f, 0.478530705f, 0.568745434f, 0.735062182f, 0.694262207f, 0.446345568f, 0.424875289f, 0.62985152f, 0.754763126f, 0.799610317f, 0.799610317f, 0.357909918f, 0.357909918f, 0.125422463f, 0.141367719f, 0.405745685f, 0.46614942f, 0.322578937f, 0.292288035f, 0.375276685f, 0.537602663f, 0.779266059f, 0.788439274f, 0.565122366f, 0.565122366f, 0.357909918f, 0.357909918f, 0.125422463f, 0.141367719f, 0.405745685f, 0.46614942f, 0.322578937f, 0.292288035f, 0.375276685f, 0.537602663f, 0.779266059f, 0.788439274f, 0.565122366f, 0.565122366f};

}  // namespace ape::fixtures

#endif  // APE_TESTS_ORACLE_FIXTURES_HPP_
