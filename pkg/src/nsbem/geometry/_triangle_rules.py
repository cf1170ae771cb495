"""Symmetric quadrature rules on the reference triangle.

Generated by tools/gen_triangle_rules.py; do not edit by hand.
Points are (xi, eta) on the triangle (0,0), (1,0), (0,1); weights
sum to 1/2.
"""

RULES = {
    2: (
        [
            (0.16666666666666666, 0.16666666666666666),
            (0.16666666666666666, 0.6666666666666667),
            (0.6666666666666667, 0.16666666666666666),
        ],
        [
            0.16666666666666666,
            0.16666666666666666,
            0.16666666666666666,
        ],
    ),
    4: (
        [
            (0.4459484909159649, 0.4459484909159649),
            (0.4459484909159649, 0.10810301816807022),
            (0.10810301816807022, 0.4459484909159649),
            (0.09157621350977076, 0.09157621350977076),
            (0.09157621350977076, 0.8168475729804585),
            (0.8168475729804585, 0.09157621350977076),
        ],
        [
            0.11169079483900571,
            0.11169079483900571,
            0.11169079483900571,
            0.05497587182766095,
            0.05497587182766095,
            0.05497587182766095,
        ],
    ),
    5: (
        [
            (0.3333333333333333, 0.3333333333333333),
            (0.10128650732345633, 0.10128650732345633),
            (0.10128650732345633, 0.7974269853530873),
            (0.7974269853530873, 0.10128650732345633),
            (0.47014206410511505, 0.47014206410511505),
            (0.47014206410511505, 0.05971587178976989),
            (0.05971587178976989, 0.47014206410511505),
        ],
        [
            0.11249999999999989,
            0.06296959027241357,
            0.06296959027241357,
            0.06296959027241357,
            0.06619707639425314,
            0.06619707639425314,
            0.06619707639425314,
        ],
    ),
    6: (
        [
            (0.24928674517091043, 0.24928674517091043),
            (0.24928674517091043, 0.5014265096581791),
            (0.5014265096581791, 0.24928674517091043),
            (0.0630890144915022, 0.0630890144915022),
            (0.0630890144915022, 0.8738219710169957),
            (0.8738219710169957, 0.0630890144915022),
            (0.6365024991213987, 0.3103524510337844),
            (0.3103524510337844, 0.6365024991213987),
            (0.6365024991213987, 0.05314504984481694),
            (0.05314504984481694, 0.6365024991213987),
            (0.3103524510337844, 0.05314504984481694),
            (0.05314504984481694, 0.3103524510337844),
        ],
        [
            0.058393137863189684,
            0.058393137863189684,
            0.058393137863189684,
            0.025422453185103402,
            0.025422453185103402,
            0.025422453185103402,
            0.04142553780918679,
            0.04142553780918679,
            0.04142553780918679,
            0.04142553780918679,
            0.04142553780918679,
            0.04142553780918679,
        ],
    ),
    8: (
        [
            (0.3333333333333333, 0.3333333333333333),
            (0.4592925882927231, 0.4592925882927231),
            (0.4592925882927231, 0.08141482341455375),
            (0.08141482341455375, 0.4592925882927231),
            (0.05054722831703097, 0.05054722831703097),
            (0.05054722831703097, 0.8989055433659381),
            (0.8989055433659381, 0.05054722831703097),
            (0.17056930775176019, 0.17056930775176019),
            (0.17056930775176019, 0.6588613844964797),
            (0.6588613844964797, 0.17056930775176019),
            (0.7284923929554042, 0.2631128296346381),
            (0.2631128296346381, 0.7284923929554042),
            (0.7284923929554042, 0.008394777409957643),
            (0.008394777409957643, 0.7284923929554042),
            (0.2631128296346381, 0.008394777409957643),
            (0.008394777409957643, 0.2631128296346381),
        ],
        [
            0.07215780383889359,
            0.04754581713364233,
            0.04754581713364233,
            0.04754581713364233,
            0.016229248811599043,
            0.016229248811599043,
            0.016229248811599043,
            0.05160868526735909,
            0.05160868526735909,
            0.05160868526735909,
            0.013615157087217495,
            0.013615157087217495,
            0.013615157087217495,
            0.013615157087217495,
            0.013615157087217495,
            0.013615157087217495,
        ],
    ),
    9: (
        [
            (0.3333333333333333, 0.3333333333333333),
            (0.4896825191987376, 0.4896825191987376),
            (0.4896825191987376, 0.02063496160252476),
            (0.02063496160252476, 0.4896825191987376),
            (0.4370895914929367, 0.4370895914929367),
            (0.4370895914929367, 0.12582081701412662),
            (0.12582081701412662, 0.4370895914929367),
            (0.0447295133944527, 0.0447295133944527),
            (0.0447295133944527, 0.9105409732110946),
            (0.9105409732110946, 0.0447295133944527),
            (0.18820353561903275, 0.18820353561903275),
            (0.18820353561903275, 0.6235929287619345),
            (0.6235929287619345, 0.18820353561903275),
            (0.741198598784498, 0.22196298916076568),
            (0.22196298916076568, 0.741198598784498),
            (0.741198598784498, 0.036838412054736314),
            (0.036838412054736314, 0.741198598784498),
            (0.22196298916076568, 0.036838412054736314),
            (0.036838412054736314, 0.22196298916076568),
        ],
        [
            0.04856789814139946,
            0.015667350113569515,
            0.015667350113569515,
            0.015667350113569515,
            0.03891377050238715,
            0.03891377050238715,
            0.03891377050238715,
            0.012788837829349014,
            0.012788837829349014,
            0.012788837829349014,
            0.03982386946360512,
            0.03982386946360512,
            0.03982386946360512,
            0.021641769688644685,
            0.021641769688644685,
            0.021641769688644685,
            0.021641769688644685,
            0.021641769688644685,
            0.021641769688644685,
        ],
    ),
    10: (
        [
            (0.3333333333333333, 0.3333333333333333),
            (0.14216110105656443, 0.14216110105656443),
            (0.14216110105656443, 0.7156777978868711),
            (0.7156777978868711, 0.14216110105656443),
            (0.03205537321694345, 0.03205537321694345),
            (0.03205537321694345, 0.9358892535661131),
            (0.9358892535661131, 0.03205537321694345),
            (0.8079306009228792, 0.16370173373718244),
            (0.16370173373718244, 0.8079306009228792),
            (0.8079306009228792, 0.028367665339938397),
            (0.028367665339938397, 0.8079306009228792),
            (0.16370173373718244, 0.028367665339938397),
            (0.028367665339938397, 0.16370173373718244),
            (0.530054118927344, 0.14813288578382053),
            (0.14813288578382053, 0.530054118927344),
            (0.530054118927344, 0.32181299528883545),
            (0.32181299528883545, 0.530054118927344),
            (0.14813288578382053, 0.32181299528883545),
            (0.32181299528883545, 0.14813288578382053),
            (0.02961988948872976, 0.6012333286834592),
            (0.6012333286834592, 0.02961988948872976),
            (0.02961988948872976, 0.369146781827811),
            (0.369146781827811, 0.02961988948872976),
            (0.6012333286834592, 0.369146781827811),
            (0.369146781827811, 0.6012333286834592),
        ],
        [
            0.04087166457314298,
            0.022978981802372372,
            0.022978981802372372,
            0.022978981802372372,
            0.0066764844065747755,
            0.0066764844065747755,
            0.0066764844065747755,
            0.012648878853644198,
            0.012648878853644198,
            0.012648878853644198,
            0.012648878853644198,
            0.012648878853644198,
            0.012648878853644198,
            0.031952453198212015,
            0.031952453198212015,
            0.031952453198212015,
            0.031952453198212015,
            0.031952453198212015,
            0.031952453198212015,
            0.017092324081479718,
            0.017092324081479718,
            0.017092324081479718,
            0.017092324081479718,
            0.017092324081479718,
            0.017092324081479718,
        ],
    ),
    12: (
        [
            (0.12757614554158597, 0.12757614554158597),
            (0.12757614554158597, 0.744847708916828),
            (0.744847708916828, 0.12757614554158597),
            (0.2712103850121159, 0.2712103850121159),
            (0.2712103850121159, 0.45757922997576816),
            (0.45757922997576816, 0.2712103850121159),
            (0.43972439229446025, 0.43972439229446025),
            (0.43972439229446025, 0.1205512154110795),
            (0.1205512154110795, 0.43972439229446025),
            (0.021317350453210343, 0.021317350453210343),
            (0.021317350453210343, 0.9573652990935793),
            (0.9573652990935793, 0.021317350453210343),
            (0.48821738977380486, 0.48821738977380486),
            (0.48821738977380486, 0.02356522045239029),
            (0.02356522045239029, 0.48821738977380486),
            (0.6958360867878034, 0.28132558098993954),
            (0.28132558098993954, 0.6958360867878034),
            (0.6958360867878034, 0.022838332222257063),
            (0.022838332222257063, 0.6958360867878034),
            (0.28132558098993954, 0.022838332222257063),
            (0.022838332222257063, 0.28132558098993954),
            (0.11625191590759709, 0.8580140335440727),
            (0.8580140335440727, 0.11625191590759709),
            (0.11625191590759709, 0.025734050548330223),
            (0.025734050548330223, 0.11625191590759709),
            (0.8580140335440727, 0.025734050548330223),
            (0.025734050548330223, 0.8580140335440727),
            (0.2757132696855143, 0.11534349453469797),
            (0.11534349453469797, 0.2757132696855143),
            (0.2757132696855143, 0.6089432357797878),
            (0.6089432357797878, 0.2757132696855143),
            (0.11534349453469797, 0.6089432357797878),
            (0.6089432357797878, 0.11534349453469797),
        ],
        [
            0.01739805646535449,
            0.01739805646535449,
            0.01739805646535449,
            0.031429112108942545,
            0.031429112108942545,
            0.031429112108942545,
            0.021846272269019185,
            0.021846272269019185,
            0.021846272269019185,
            0.0030831305257795053,
            0.0030831305257795053,
            0.0030831305257795053,
            0.012865533220227663,
            0.012865533220227663,
            0.012865533220227663,
            0.011178386601151724,
            0.011178386601151724,
            0.011178386601151724,
            0.011178386601151724,
            0.011178386601151724,
            0.011178386601151724,
            0.008658115554329448,
            0.008658115554329448,
            0.008658115554329448,
            0.008658115554329448,
            0.008658115554329448,
            0.008658115554329448,
            0.020185778883190467,
            0.020185778883190467,
            0.020185778883190467,
            0.020185778883190467,
            0.020185778883190467,
            0.020185778883190467,
        ],
    ),
    13: (
        [
            (0.3333333333333333, 0.3333333333333333),
            (0.114539564163799, 0.114539564163799),
            (0.114539564163799, 0.770920871672402),
            (0.770920871672402, 0.114539564163799),
            (0.4950329383376775, 0.4950329383376775),
            (0.4950329383376775, 0.00993412332464505),
            (0.00993412332464505, 0.4950329383376775),
            (0.41470454427408315, 0.41470454427408315),
            (0.41470454427408315, 0.1705909114518337),
            (0.1705909114518337, 0.41470454427408315),
            (0.22923151482647205, 0.22923151482647205),
            (0.22923151482647205, 0.5415369703470558),
            (0.5415369703470558, 0.22923151482647205),
            (0.024799309375591303, 0.024799309375591303),
            (0.024799309375591303, 0.9504013812488173),
            (0.9504013812488173, 0.024799309375591303),
            (0.4688322554811344, 0.4688322554811344),
            (0.4688322554811344, 0.06233548903773123),
            (0.06233548903773123, 0.4688322554811344),
            (0.6903367229220433, 0.2916813421891854),
            (0.2916813421891854, 0.6903367229220433),
            (0.6903367229220433, 0.01798193488877131),
            (0.01798193488877131, 0.6903367229220433),
            (0.2916813421891854, 0.01798193488877131),
            (0.01798193488877131, 0.2916813421891854),
            (0.6364599880425267, 0.09448929857598666),
            (0.09448929857598666, 0.6364599880425267),
            (0.6364599880425267, 0.2690507133814867),
            (0.2690507133814867, 0.6364599880425267),
            (0.09448929857598666, 0.2690507133814867),
            (0.2690507133814867, 0.09448929857598666),
            (0.8514331569229839, 0.12629769103404964),
            (0.12629769103404964, 0.8514331569229839),
            (0.8514331569229839, 0.022269152042966422),
            (0.022269152042966422, 0.8514331569229839),
            (0.12629769103404964, 0.022269152042966422),
            (0.022269152042966422, 0.12629769103404964),
        ],
        [
            0.026394520777924393,
            0.015600317000420609,
            0.015600317000420609,
            0.015600317000420609,
            0.00563895597076968,
            0.00563895597076968,
            0.00563895597076968,
            0.023586413452787496,
            0.023586413452787496,
            0.023586413452787496,
            0.023771123749884732,
            0.023771123749884732,
            0.023771123749884732,
            0.003984109154167053,
            0.003984109154167053,
            0.003984109154167053,
            0.01562920444728534,
            0.01562920444728534,
            0.01562920444728534,
            0.008653068209445183,
            0.008653068209445183,
            0.008653068209445183,
            0.008653068209445183,
            0.008653068209445183,
            0.008653068209445183,
            0.01840642515899629,
            0.01840642515899629,
            0.01840642515899629,
            0.01840642515899629,
            0.01840642515899629,
            0.01840642515899629,
            0.007769691280913678,
            0.007769691280913678,
            0.007769691280913678,
            0.007769691280913678,
            0.007769691280913678,
            0.007769691280913678,
        ],
    ),
    14: (
        [
            (0.27347752830883865, 0.27347752830883865),
            (0.27347752830883865, 0.4530449433823227),
            (0.4530449433823227, 0.27347752830883865),
            (0.01939096124870103, 0.01939096124870103),
            (0.01939096124870103, 0.9612180775025979),
            (0.9612180775025979, 0.01939096124870103),
            (0.417644719340454, 0.417644719340454),
            (0.417644719340454, 0.164710561319092),
            (0.164710561319092, 0.417644719340454),
            (0.06179988309087253, 0.06179988309087253),
            (0.06179988309087253, 0.8764002338182549),
            (0.8764002338182549, 0.06179988309087253),
            (0.4889639103621786, 0.4889639103621786),
            (0.4889639103621786, 0.022072179275642756),
            (0.022072179275642756, 0.4889639103621786),
            (0.1772055324125434, 0.1772055324125434),
            (0.1772055324125434, 0.6455889351749132),
            (0.6455889351749132, 0.1772055324125434),
            (0.057124757403647884, 0.7706085547749966),
            (0.7706085547749966, 0.057124757403647884),
            (0.057124757403647884, 0.17226668782135557),
            (0.17226668782135557, 0.057124757403647884),
            (0.7706085547749966, 0.17226668782135557),
            (0.17226668782135557, 0.7706085547749966),
            (0.8797571713701713, 0.11897449769695677),
            (0.11897449769695677, 0.8797571713701713),
            (0.8797571713701713, 0.0012683309328719444),
            (0.0012683309328719444, 0.8797571713701713),
            (0.11897449769695677, 0.0012683309328719444),
            (0.0012683309328719444, 0.11897449769695677),
            (0.09291624935697183, 0.3368614597963449),
            (0.3368614597963449, 0.09291624935697183),
            (0.09291624935697183, 0.5702222908466832),
            (0.5702222908466832, 0.09291624935697183),
            (0.3368614597963449, 0.5702222908466832),
            (0.5702222908466832, 0.3368614597963449),
            (0.2983728821362578, 0.6869801678080878),
            (0.6869801678080878, 0.2983728821362578),
            (0.2983728821362578, 0.014646950055654417),
            (0.014646950055654417, 0.2983728821362578),
            (0.6869801678080878, 0.014646950055654417),
            (0.014646950055654417, 0.6869801678080878),
        ],
        [
            0.0258870522536458,
            0.0258870522536458,
            0.0258870522536458,
            0.0024617018012000375,
            0.0024617018012000375,
            0.0024617018012000375,
            0.01639417677206268,
            0.01639417677206268,
            0.01639417677206268,
            0.00721684983488832,
            0.00721684983488832,
            0.00721684983488832,
            0.010941790684714455,
            0.010941790684714455,
            0.010941790684714455,
            0.021081294368496515,
            0.021081294368496515,
            0.021081294368496515,
            0.012332876606281844,
            0.012332876606281844,
            0.012332876606281844,
            0.012332876606281844,
            0.012332876606281844,
            0.012332876606281844,
            0.0025051144192503295,
            0.0025051144192503295,
            0.0025051144192503295,
            0.0025051144192503295,
            0.0025051144192503295,
            0.0025051144192503295,
            0.019285755393530335,
            0.019285755393530335,
            0.019285755393530335,
            0.019285755393530335,
            0.019285755393530335,
            0.019285755393530335,
            0.00721815405676692,
            0.00721815405676692,
            0.00721815405676692,
            0.00721815405676692,
            0.00721815405676692,
            0.00721815405676692,
        ],
    ),
}
