"""Frozen oracle values for the acceptance suite (see tests/oracles.py)."""

# Frozen log 2F1(a,1;c;z) oracle values (direct series, 200 digits).
# Regenerate with: python -m tests.oracles
FROZEN_2F1 = [
    (500.0, 2.0, 0.999, 3440.758278616668),
    (200.0, 4.0, 0.999, 1346.7577753455525),
    (1.0, 40.0, 0.0, 0.0),
    (500.0, 40.0, 0.999, 3050.379031122267),
    (1.0, 2.0, 0.999, 1.9336452342496488),
    (338.2398376526596, 10.144281647053791, 0.30914257885081003, 92.4538615302716),
    (399.93358229064177, 39.84047975688774, 0.14208958346477174, 6.46797480385645),
    (40.28404134723749, 8.871304920480476, 0.3592872447976616, 4.648855317048019),
    (85.64000560381712, 24.372853990509746, 0.6161907063099543, 23.40558760016349),
    (53.58745419443945, 23.497779938981562, 0.0046250136850573935, 0.010600912599390808),
    (233.09448050500234, 39.07364350988443, 0.7986290100130454, 220.16697382234383),
    (298.81436098535517, 14.363286893143455, 0.2061375674741448, 34.658940764932694),
    (221.9200579793248, 12.565573190196579, 0.8740828822860977, 394.1887526820934),
    (107.36551552124989, 12.42131016170066, 0.8063748044813904, 125.7989602985477),
    (134.91429766151424, 12.186389043569912, 0.07081090244592662, 1.2050470897344219),
    (234.13719809884515, 12.039806717737804, 0.8880530959934608, 447.48994531456884),
    (143.87283795876476, 31.403143404544426, 0.4867576161912331, 26.127636051513488),
    (234.54150442036976, 38.667347914658166, 0.897329106977233, 351.68010066408283),
    (40.43812423167836, 11.3177622850141, 0.18460229159795238, 0.9512597531016357),
    (452.8319771164275, 23.045617604366637, 0.3712873218456986, 136.12541120045935),
    (417.11461843354806, 15.253357980249302, 0.6809723979323309, 405.8756800789117),
    (114.94693430811297, 2.907146986865354, 0.6954228644989237, 126.6630072020123),
    (169.0895301183626, 14.995718713405568, 0.2755650271390392, 22.050954897286356),
    (126.42052432263424, 23.664010095341084, 0.33352236481534564, 10.112507784060709),
    (213.37329823330353, 9.67333262578662, 0.5046545112809107, 115.48917041239103),
    (293.10822627691465, 17.971406114119418, 0.40304341922899883, 95.4315081117958),
    (472.0274655301818, 3.8320703885452545, 0.3257477167240356, 172.26958968077443),
    (259.94673395400224, 24.741258007193313, 0.042252811117749284, 0.5674305509703914),
    (121.3871401882965, 4.0617410530199205, 0.007723028595322919, 0.24820832490286873),
    (161.72679545400553, 17.46595099945901, 0.8583151784970224, 235.5395698621995),
    (7.724750459611573, 29.216952992608288, 0.45649654744668944, 0.13039275225980224),
    (294.94843136516226, 7.562987928696933, 0.801157043565996, 437.6863747538361),
    (190.27215218592818, 17.572995789604075, 0.5652552895743518, 100.2400371767955),
    (131.09731021605592, 18.58162114519035, 0.13468403990866396, 1.799402110153214),
    (351.74268800329446, 5.821319177465503, 0.27923823097154166, 96.00749072108047),
    (110.04178507886952, 7.00181234610258, 0.5485420502614113, 64.90800609326298),
    (99.2816210540996, 30.54444318030415, 0.27959283762508497, 1.8408031341398092),
    (484.0360404185105, 23.47428333290662, 0.08788809242119795, 8.677668288411965),
    (310.49556661243156, 9.942731926721544, 0.3773698396997091, 113.09425828795146),
    (104.56259011350785, 12.796762620711622, 0.6126363651109562, 59.13356512435281),
    (253.2269530004637, 2.7455224413517794, 0.9158170170130748, 613.3311302720338),
    (124.16576629255448, 20.459831606327555, 0.12813138413408195, 1.2766698803423726),
    (192.37952612940816, 31.72847141660138, 0.2389087452637352, 6.345624455771982),
    (422.4306253824595, 25.33501345361854, 0.6331193692833301, 319.7743757131437),
    (452.6322144135049, 21.367846151977506, 0.1386173684621859, 24.135902138866783),
    (320.5990748616797, 26.1081971170165, 0.7992680892944036, 394.64641312267145),
    (64.1445699745107, 10.284867922744093, 0.9316379390221836, 123.43986865335748),
    (281.8407226247791, 9.750322369240688, 0.423390451897089, 120.91378503296401),
    (196.31050546961106, 6.952884076930444, 0.5916552333664089, 148.78516459176436),
    (26.914878691916304, 4.27133298382808, 0.25856983415866214, 3.1116785726153005),
]
